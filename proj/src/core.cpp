#include "poisim/core.hpp"

#include <cmath>
#include <stdexcept>

namespace poisim {

Label label_from_int(int v) {
  if (v != 0 && v != 1) {
    throw std::invalid_argument("label must be 0 or 1, got " + std::to_string(v));
  }
  return v == 0 ? Label::real_news : Label::fake_news;
}

Label flip(Label y) {
  return y == Label::real_news ? Label::fake_news : Label::real_news;
}

void validate_sample(const Sample& s) {
  if (!std::isfinite(s.x) || s.x < 0.0 || s.x > 1.0) {
    throw std::invalid_argument("sample feature x must lie in [0, 1]");
  }
  const auto y = static_cast<std::uint8_t>(s.y);
  if (y != 0 && y != 1) {
    throw std::invalid_argument("sample label must be binary");
  }
}

void Dataset::reserve(std::size_t n) {
  x_.reserve(n);
  y_.reserve(n);
  prov_.reserve(n);
}

void Dataset::append(const Sample& s) {
  validate_sample(s);
  x_.push_back(s.x);
  y_.push_back(s.y);
  prov_.push_back(s.provenance);
  if (s.provenance == Provenance::organic) {
    ++organic_;
  } else {
    ++poison_;
  }
}

void Dataset::append(std::span<const Sample> batch) {
  reserve(size() + batch.size());
  for (const Sample& s : batch) {
    append(s);
  }
}

Dataset dataset_append(Dataset d, std::span<const Sample> batch) {
  d.append(batch);
  return d;
}

std::pair<std::size_t, std::size_t> dataset_counts(const Dataset& d) {
  return {d.organic_count(), d.poison_count()};
}

std::vector<Sample> to_samples(const Dataset& d) {
  std::vector<Sample> rows;
  rows.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    rows.push_back(d[i]);
  }
  return rows;
}

void validate_target(const TargetSpec& t) {
  if (!std::isfinite(t.x_target) || t.x_target < 0.0 || t.x_target > 1.0) {
    throw std::invalid_argument("target x must lie in [0, 1]");
  }
}

}  // namespace poisim
