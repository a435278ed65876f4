#pragma once

// Named numerical check suites shared by `cutloci verify` and the acceptance
// test. Every check compares a measured residual against a fixed bound.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cutloci/report.hpp"

namespace cutloci::checks {

using Params = std::map<std::string, std::string>;

/// Parses "key=value,key=value".
Params parse_params(std::string_view text);

std::vector<Check> sphere_joins();
std::vector<Check> point_cut_locus();
std::vector<Check> orthogonal_oracle();
std::vector<Check> flow_ode();
std::vector<Check> derivative_oracles();
std::vector<Check> left_invariant_distance();
std::vector<Check> upq_structure();
std::vector<Check> ellipse_regularity();
std::vector<Check> morse_bott();
std::vector<Check> hopf_link();
std::vector<Check> equivariant_quotients();
/// All verification cases, or the single case given by params "n" and "d".
std::vector<Check> fermat(const Params& params = {});
std::vector<Check> matfun_contracts();

/// matfun, flows, groupgeo, cutlocus, equivariant, fermat, all.
const std::vector<std::string>& suite_names();
/// Throws Error(ParseError) for an unknown suite.
std::vector<Check> run_suite(std::string_view name, const Params& params = {});

}  // namespace cutloci::checks
