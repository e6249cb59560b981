#pragma once
// Domain types shared by every module: samples, datasets, attack targets.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace poisim {

/// Binary news label. Class 1 is the "fake" class: model probabilities are
/// always P(fake).
enum class Label : std::uint8_t { real_news = 0, fake_news = 1 };

/// Whether a training record came from the generator or from an attack.
/// Bookkeeping only -- the model never sees this field.
enum class Provenance : std::uint8_t { organic = 0, poison = 1 };

inline int label_value(Label y) { return static_cast<int>(y); }
Label label_from_int(int v);  // rejects anything outside {0, 1}
Label flip(Label y);

/// One news item: a scalar feature in [0, 1] plus its label.
struct Sample {
  double x = 0.0;
  Label y = Label::real_news;
  Provenance provenance = Provenance::organic;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Throws std::invalid_argument unless x is finite and in [0, 1].
void validate_sample(const Sample& s);

/// Append-only, insertion-ordered collection of samples.
/// Stored column-wise so the numeric code can iterate features directly.
class Dataset {
 public:
  Dataset() = default;

  std::size_t size() const { return x_.size(); }
  bool empty() const { return x_.empty(); }

  double x(std::size_t i) const { return x_[i]; }
  Label y(std::size_t i) const { return y_[i]; }
  Provenance provenance(std::size_t i) const { return prov_[i]; }
  Sample operator[](std::size_t i) const { return {x_[i], y_[i], prov_[i]}; }

  const std::vector<double>& xs() const { return x_; }
  const std::vector<Label>& labels() const { return y_; }
  const std::vector<Provenance>& provenances() const { return prov_; }

  std::size_t organic_count() const { return organic_; }
  std::size_t poison_count() const { return poison_; }

  void reserve(std::size_t n);
  /// Validates and appends; existing entries are never touched.
  void append(const Sample& s);
  void append(std::span<const Sample> batch);

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<double> x_;
  std::vector<Label> y_;
  std::vector<Provenance> prov_;
  std::size_t organic_ = 0;
  std::size_t poison_ = 0;
};

/// Returns d extended by `batch`, preserving prior contents and order.
Dataset dataset_append(Dataset d, std::span<const Sample> batch);

/// Row-wise copy of the dataset, in insertion order.
std::vector<Sample> to_samples(const Dataset& d);

/// (organic, poison) partition of the dataset size.
std::pair<std::size_t, std::size_t> dataset_counts(const Dataset& d);

/// The sample the attacker wants misclassified. Exists only as an
/// evaluation point; never inserted into training data in modified form.
struct TargetSpec {
  double x_target = 0.0;
  Label y_true = Label::real_news;

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

void validate_target(const TargetSpec& t);

}  // namespace poisim
