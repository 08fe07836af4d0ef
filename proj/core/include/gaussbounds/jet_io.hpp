#pragma once

#include <filesystem>
#include <string>

#include "gaussbounds/logderiv.hpp"

namespace gaussbounds {

// Jet file schema:
//   {"modes": m, "params": [names], "d": [2m], "sigma": [[2m x 2m]],
//    "dd": [p x [2m]], "dsigma": [p x [[2m x 2m]]]}
// Matrices are row-major. Errors are std::invalid_argument of the form
// "<source>:<line>: <field>: <message>".
ModelJet parse_jet_json(const std::string& text, const std::string& source = "<jet>");
ModelJet load_jet_file(const std::filesystem::path& path);

std::string jet_to_json(const ModelJet& jet, int indent = 2);

}  // namespace gaussbounds
