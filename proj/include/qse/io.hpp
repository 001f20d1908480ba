#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "qse/analysis.hpp"
#include "qse/homodyne.hpp"
#include "qse/tomo.hpp"

// File formats. Doubles are written with 17 significant digits so every
// format round-trips losslessly.

namespace qse {

std::string trigger_name(Trigger t);
Trigger trigger_from_name(const std::string& name);

// CSV schema: time_s,trigger,quadrature,true_phase_rad,est_phase_rad
// (est_phase empty until estimated).
void write_dataset_csv(const AcquisitionDataset& ds, std::ostream& out);
AcquisitionDataset read_dataset_csv(std::istream& in);
void write_dataset_csv_file(const AcquisitionDataset& ds, const std::string& path);
AcquisitionDataset read_dataset_csv_file(const std::string& path);

nlohmann::json dataset_to_json(const AcquisitionDataset& ds);
AcquisitionDataset dataset_from_json(const nlohmann::json& j);

nlohmann::json complex_to_json(const Complex& z);            // [re, im]
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const DensityMatrix& m);       // nested [re, im] pairs
DensityMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const FockVector& v);
FockVector vector_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ReconstructionReport& rep);
ReconstructionReport report_from_json(const nlohmann::json& j);

nlohmann::json wigner_to_json(const WignerGrid& grid);       // axes + row-major values
void write_wigner_csv(const WignerGrid& grid, std::ostream& out);  // x,p,w triples

void write_text_file(const std::string& path, const std::string& content);
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace qse
