#include "qse/tomo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qse/imperfect.hpp"

namespace qse {

namespace {

constexpr double kPi = 3.14159265358979323846;
// The wavefunctions used here are numerically zero beyond this point.
constexpr double kIntegrationCut = 12.0;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
struct GaussRule {
    std::vector<double> nodes, weights;
};

const GaussRule& gauss_rule() {
    static const GaussRule rule = [] {
        constexpr int n = 24;
        GaussRule r;
        r.nodes.resize(n);
        r.weights.resize(n);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) {
                    r.nodes[i] = x;
                    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
                    break;
                }
            }
        }
        return r;
    }();
    return rule;
}

// integral over [a, b] of psi_m psi_n for all m, n <= n_max, composite 24-point panels.
Eigen::MatrixXd wavefunction_overlaps(double a, double b, int n_max) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
    if (!(b > a)) return G;
    const auto& rule = gauss_rule();
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 0.5)));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double q = lo + 0.5 * h * (rule.nodes[i] + 1.0);
            const double w = 0.5 * h * rule.weights[i];
            const Eigen::VectorXd psi = quad_wavefunctions(n_max, q);
            G.noalias() += w * (psi * psi.transpose());
        }
    }
    return G;
}

Eigen::MatrixXd interval_overlaps(QInterval itv, int n_max) {
    const double lo = std::isinf(itv.lo) ? -kIntegrationCut : std::max(itv.lo, -kIntegrationCut);
    const double hi = std::isinf(itv.hi) ? kIntegrationCut : std::min(itv.hi, kIntegrationCut);
    return wavefunction_overlaps(lo, hi, n_max);
}

PovmElement phase_wrap(const Eigen::MatrixXd& G, double phi) {
    const int dim = static_cast<int>(G.rows());
    PovmElement out(dim, dim);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n)
            out(m, n) = G(m, n) * std::exp(Complex(0, (m - n) * phi));
    return out;
}

}  // namespace

PovmElement quad_projector(QInterval interval, double phi, int n_max) {
    if (n_max < 0) throw std::invalid_argument("quad_projector: n_max must be >= 0");
    return phase_wrap(interval_overlaps(interval, n_max), phi);
}

PovmElement lossy_povm(QInterval interval, double phi, double eta, int n_max) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta: must be in (0, 1]");
    const PovmElement ideal = quad_projector(interval, phi, n_max);
    PovmElement out = PovmElement::Zero(n_max + 1, n_max + 1);
    for (const auto& A : loss_kraus(eta, n_max)) out += A.transpose() * ideal * A;
    return out;
}

double BinnedData::phase_center(int i) const {
    return (i + 0.5) * 2.0 * kPi / phase_bin_count;
}

QInterval BinnedData::q_interval(int j) const {
    const double inf = std::numeric_limits<double>::infinity();
    if (j == 0) return {-inf, q_min};
    if (j == q_bin_count + 1) return {q_max, inf};
    const double w = (q_max - q_min) / q_bin_count;
    return {q_min + (j - 1) * w, q_min + j * w};
}

BinnedData bin_samples(const AcquisitionDataset& dataset, const BinOptions& opts) {
    if (opts.phase_bins < 1 || opts.q_bins < 1 || !(opts.q_max > opts.q_min))
        throw std::invalid_argument("bin_samples: bad binning parameters");
    BinnedData out;
    out.phase_bin_count = opts.phase_bins;
    out.q_bin_count = opts.q_bins;
    out.q_min = opts.q_min;
    out.q_max = opts.q_max;
    out.counts.assign(opts.phase_bins, std::vector<std::int64_t>(opts.q_bins + 2, 0));

    const double qw = (opts.q_max - opts.q_min) / opts.q_bins;
    std::size_t index = 0;
    for (const auto& r : dataset.records) {
        ++index;
        if (opts.trigger_filter && r.trigger != *opts.trigger_filter) continue;
        const double phase = opts.use_true_phase ? r.true_phase : r.est_phase;
        if (std::isnan(phase))
            throw std::invalid_argument("bin_samples: record " + std::to_string(index - 1) +
                                        " is missing est_phase; run estimate_phase or use the "
                                        "oracle-phase mode");
        double w = std::fmod(phase, 2.0 * kPi);
        if (w < 0) w += 2.0 * kPi;
        const int pb = std::min(static_cast<int>(w / (2.0 * kPi) * opts.phase_bins),
                                opts.phase_bins - 1);
        int qb;
        if (r.value < opts.q_min)
            qb = 0;
        else if (r.value >= opts.q_max)
            qb = opts.q_bins + 1;
        else
            qb = 1 + std::min(static_cast<int>((r.value - opts.q_min) / qw), opts.q_bins - 1);
        ++out.counts[pb][qb];
        ++out.total;
    }
    return out;
}

std::vector<std::vector<PovmElement>> build_lossy_povms(const BinnedData& data, double eta,
                                                        int n_max) {
    // The interval overlap matrices are phase-independent; build once per q bin.
    std::vector<Eigen::MatrixXd> overlaps(data.q_bins_total());
    for (int j = 0; j < data.q_bins_total(); ++j)
        overlaps[j] = interval_overlaps(data.q_interval(j), n_max);

    std::vector<std::vector<PovmElement>> povms(data.phase_bin_count);
    const auto kraus = loss_kraus(eta, n_max);
    for (int i = 0; i < data.phase_bin_count; ++i) {
        povms[i].resize(data.q_bins_total());
        for (int j = 0; j < data.q_bins_total(); ++j) {
            const PovmElement ideal = phase_wrap(overlaps[j], data.phase_center(i));
            if (eta == 1.0) {
                povms[i][j] = ideal;
                continue;
            }
            PovmElement el = PovmElement::Zero(n_max + 1, n_max + 1);
            for (const auto& A : kraus) el += A.transpose() * ideal * A;
            povms[i][j] = el;
        }
    }
    return povms;
}

namespace {

constexpr double kProbFloor = 1e-300;

struct OccupiedBin {
    double frequency;
    const PovmElement* povm;
};

double loglik_impl(const DensityMatrix& rho, const std::vector<OccupiedBin>& bins,
                   int* floored = nullptr) {
    double ll = 0.0;
    for (const auto& b : bins) {
        double p = std::real((rho * (*b.povm)).trace());
        if (p < kProbFloor) {
            p = kProbFloor;
            if (floored) ++(*floored);
        }
        ll += b.frequency * std::log(p);
    }
    return ll;
}

}  // namespace

double loglikelihood(const DensityMatrix& rho, const BinnedData& data, double eta) {
    if (data.total <= 0) throw std::invalid_argument("loglikelihood: empty data");
    const int n_max = static_cast<int>(rho.rows()) - 1;
    const auto povms = build_lossy_povms(data, eta, n_max);
    std::vector<OccupiedBin> bins;
    for (int i = 0; i < data.phase_bin_count; ++i)
        for (int j = 0; j < data.q_bins_total(); ++j)
            if (data.counts[i][j] > 0)
                bins.push_back({static_cast<double>(data.counts[i][j]) / data.total,
                                &povms[i][j]});
    return loglik_impl(rho, bins);
}

ReconstructionReport maxlik_reconstruct(const BinnedData& data, double eta,
                                        const MaxlikOptions& opts) {
    if (data.total <= 0) throw std::invalid_argument("maxlik_reconstruct: empty data");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta: must be in (0, 1]");

    const int dim = opts.n_max + 1;
    const auto povms = build_lossy_povms(data, eta, opts.n_max);
    std::vector<OccupiedBin> bins;
    for (int i = 0; i < data.phase_bin_count; ++i)
        for (int j = 0; j < data.q_bins_total(); ++j)
            if (data.counts[i][j] > 0)
                bins.push_back({static_cast<double>(data.counts[i][j]) / data.total,
                                &povms[i][j]});

    ReconstructionReport rep;
    rep.rho = DensityMatrix::Identity(dim, dim) / dim;
    rep.final_loglik = loglik_impl(rep.rho, bins, &rep.floored_bins);
    rep.loglik_trace.push_back(rep.final_loglik);

    bool diluted = false;
    for (int it = 0; it < opts.max_iter; ++it) {
        DensityMatrix R = DensityMatrix::Zero(dim, dim);
        for (const auto& b : bins) {
            double p = std::real((rep.rho * (*b.povm)).trace());
            if (p < kProbFloor) {
                p = kProbFloor;
                ++rep.floored_bins;
            }
            R += (b.frequency / p) * (*b.povm);
        }
        if (diluted) R = (DensityMatrix::Identity(dim, dim) + opts.dilution * R) /
                         (1.0 + opts.dilution);

        DensityMatrix next = R * rep.rho * R;
        next = 0.5 * (next + next.adjoint()).eval();
        next /= next.trace().real();

        const double ll = loglik_impl(next, bins, &rep.floored_bins);
        if (ll < rep.final_loglik - 1e-9 && !diluted) {
            diluted = true;  // revert and retry with the diluted map
            rep.dilution_engaged = true;
            continue;
        }
        ++rep.iterations;
        rep.rho = std::move(next);
        const double delta = ll - rep.final_loglik;
        rep.final_loglik = ll;
        rep.loglik_trace.push_back(ll);
        if (std::abs(delta) < opts.loglik_tol) {
            rep.converged = true;
            break;
        }
    }
    return rep;
}

}  // namespace qse
