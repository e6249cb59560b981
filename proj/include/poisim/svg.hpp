#pragma once
// Self-contained SVG renderings of the two experiment views: poison cost
// across targets (sweep) and data plus fitted curves (snapshot). No
// external assets, fixed-precision coordinates, stable element order.

#include <span>
#include <string>

#include "poisim/core.hpp"
#include "poisim/io.hpp"
#include "poisim/model.hpp"

namespace poisim::svg {

/// Poison percentage needed to flip each target, one polyline per
/// (model degree, attack) series in first-appearance order. Censored
/// points appear as x-shaped markers above the flipped curves. Rejects an
/// empty row set.
std::string sweep_plot(std::span<const io::SweepRecord> rows);

/// The poisoned training set (circles organic, squares poison, color by
/// label), both models' P(fake) curves over [0,1], and one vertical
/// marker at the target.
std::string snapshot_plot(const Dataset& data,
                          const model::LogisticModel& linear,
                          const model::LogisticModel& quadratic,
                          const TargetSpec& target);

std::string xml_escape(std::string_view text);

}  // namespace poisim::svg
