#pragma once

#include <string>
#include <vector>

#include "blowup/dynsys.hpp"
#include "blowup/radial.hpp"
#include "blowup/verify.hpp"

namespace blowup {

// CSV emitters. All numeric fields use 17 significant digits so files
// round-trip doubles exactly and repeated runs are byte-identical.
std::string csv_radial(const RadialSolution& sol);        // r,W,U,v,V,S
std::string csv_profile(const ProfileABC& profile);       // r,a,b,c
std::string csv_trajectory(const Trajectory& traj);       // t,X,Y,Z
struct SweepRow {
  double v0 = 0, R = 0, invariant = 0;  // invariant = v0 * R^beta0
};
std::string csv_sweep(const std::vector<SweepRow>& rows);  // v0,R,v0*R^beta0

void write_text_file(const std::string& path, const std::string& content);

// Minimal static SVG line chart: labeled curves of a, b, c against r over
// [0.9, 1), horizontal unit reference, no external assets.
std::string svg_profile_chart(const ProfileABC& profile,
                              const std::string& title);

}  // namespace blowup
