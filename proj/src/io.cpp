#include "qse/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qse {

namespace {

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

std::string trigger_name(Trigger t) {
    switch (t) {
        case Trigger::Coincidence: return "coincidence";
        case Trigger::Spcm1: return "spcm1";
        case Trigger::Spcm2: return "spcm2";
    }
    throw std::logic_error("trigger_name: bad enum");
}

Trigger trigger_from_name(const std::string& name) {
    if (name == "coincidence") return Trigger::Coincidence;
    if (name == "spcm1") return Trigger::Spcm1;
    if (name == "spcm2") return Trigger::Spcm2;
    throw std::invalid_argument("trigger: unknown tag '" + name + "'");
}

void write_dataset_csv(const AcquisitionDataset& ds, std::ostream& out) {
    out << "time_s,trigger,quadrature,true_phase_rad,est_phase_rad\n";
    for (const auto& r : ds.records) {
        out << fmt17(r.time) << ',' << trigger_name(r.trigger) << ',' << fmt17(r.value) << ','
            << fmt17(r.true_phase) << ',';
        if (!std::isnan(r.est_phase)) out << fmt17(r.est_phase);
        out << '\n';
    }
}

AcquisitionDataset read_dataset_csv(std::istream& in) {
    AcquisitionDataset ds;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("dataset csv: empty file");
    if (line != "time_s,trigger,quadrature,true_phase_rad,est_phase_rad")
        throw std::invalid_argument("dataset csv: unexpected header '" + line + "'");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::array<std::string, 5> fields;
        std::size_t start = 0;
        for (int f = 0; f < 5; ++f) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                if (f != 4)
                    throw std::invalid_argument("dataset csv: line " + std::to_string(lineno) +
                                                " has too few fields");
                fields[f] = line.substr(start);
                break;
            }
            fields[f] = line.substr(start, comma - start);
            start = comma + 1;
        }
        QuadratureRecord r;
        r.time = std::stod(fields[0]);
        r.trigger = trigger_from_name(fields[1]);
        r.value = std::stod(fields[2]);
        r.true_phase = std::stod(fields[3]);
        r.est_phase = fields[4].empty() ? std::numeric_limits<double>::quiet_NaN()
                                        : std::stod(fields[4]);
        ds.records.push_back(r);
    }
    return ds;
}

void write_dataset_csv_file(const AcquisitionDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_dataset_csv(ds, out);
}

AcquisitionDataset read_dataset_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_dataset_csv(in);
}

nlohmann::json dataset_to_json(const AcquisitionDataset& ds) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : ds.records) {
        nlohmann::json rec = {{"time_s", r.time},
                              {"trigger", trigger_name(r.trigger)},
                              {"quadrature", r.value},
                              {"true_phase_rad", r.true_phase}};
        if (std::isnan(r.est_phase))
            rec["est_phase_rad"] = nullptr;
        else
            rec["est_phase_rad"] = r.est_phase;
        arr.push_back(std::move(rec));
    }
    return arr;
}

AcquisitionDataset dataset_from_json(const nlohmann::json& j) {
    AcquisitionDataset ds;
    for (const auto& rec : j) {
        QuadratureRecord r;
        r.time = rec.at("time_s").get<double>();
        r.trigger = trigger_from_name(rec.at("trigger").get<std::string>());
        r.value = rec.at("quadrature").get<double>();
        r.true_phase = rec.at("true_phase_rad").get<double>();
        const auto& est = rec.at("est_phase_rad");
        r.est_phase = est.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                    : est.get<double>();
        ds.records.push_back(r);
    }
    return ds;
}

nlohmann::json complex_to_json(const Complex& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

Complex complex_from_json(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

nlohmann::json matrix_to_json(const DensityMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

DensityMatrix matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.size();
    if (rows == 0) return DensityMatrix(0, 0);
    const auto cols = j.at(0).size();
    DensityMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = complex_from_json(j.at(i).at(k));
    return m;
}

nlohmann::json vector_to_json(const FockVector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v[i]));
    return arr;
}

FockVector vector_from_json(const nlohmann::json& j) {
    FockVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = complex_from_json(j.at(i));
    return v;
}

nlohmann::json report_to_json(const ReconstructionReport& rep) {
    return {{"rho", matrix_to_json(rep.rho)},
            {"iterations", rep.iterations},
            {"final_loglik", rep.final_loglik},
            {"converged", rep.converged}};
}

ReconstructionReport report_from_json(const nlohmann::json& j) {
    ReconstructionReport rep;
    rep.rho = matrix_from_json(j.at("rho"));
    rep.iterations = j.at("iterations").get<int>();
    rep.final_loglik = j.at("final_loglik").get<double>();
    rep.converged = j.at("converged").get<bool>();
    return rep;
}

nlohmann::json wigner_to_json(const WignerGrid& grid) {
    nlohmann::json x = nlohmann::json::array(), p = nlohmann::json::array(),
                   v = nlohmann::json::array();
    for (Eigen::Index i = 0; i < grid.x_axis.size(); ++i) x.push_back(grid.x_axis[i]);
    for (Eigen::Index i = 0; i < grid.p_axis.size(); ++i) p.push_back(grid.p_axis[i]);
    for (Eigen::Index i = 0; i < grid.values.rows(); ++i)
        for (Eigen::Index j = 0; j < grid.values.cols(); ++j) v.push_back(grid.values(i, j));
    return {{"x_axis", x}, {"p_axis", p}, {"values", v}};
}

void write_wigner_csv(const WignerGrid& grid, std::ostream& out) {
    out << "x,p,w\n";
    for (Eigen::Index i = 0; i < grid.values.rows(); ++i)
        for (Eigen::Index j = 0; j < grid.values.cols(); ++j)
            out << fmt17(grid.x_axis[i]) << ',' << fmt17(grid.p_axis[j]) << ','
                << fmt17(grid.values(i, j)) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return nlohmann::json::parse(in);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace qse
