#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace otaclass {

struct LabeledSample {
    std::vector<double> state;
    int label; // -1 normal, +1 anomaly
};

struct TrainingSet {
    std::size_t dimension = 0;
    std::vector<LabeledSample> samples;

    // Throws DegenerateSet / DimensionMismatch when the set cannot be trained on.
    void validate() const;
};

// Canonical maximum-margin separator: the closest training sample satisfies
// |w.s + b| = 1 and every sample satisfies label*(w.s + b) >= 1.
struct SeparatingHyperplane {
    std::vector<double> w;
    double b = 0.0;
};

struct SolverConfig {
    double penalty = 1e6;      // soft-margin ceiling acting as the hard-margin surrogate
    double kkt_tol = 1e-8;     // dual feasibility tolerance
    double canon_tol = 1e-5;   // allowed deviation from |w.s + b| = 1 at the margin
    std::size_t max_pass_factor = 10; // pass cap is max_pass_factor * L^2
};

// Solves the maximum-margin quadratic program on its dual with deterministic
// pairwise coordinate optimization, then rescales to canonical form.
// Throws NotSeparable when a dual multiplier hits the penalty ceiling or the
// gap fails to close, DegenerateSet on one-class or all-identical input.
SeparatingHyperplane train_svm(const TrainingSet& set, const SolverConfig& cfg = {});

// w.s + b, exact up to floating point.
double decision_value(const SeparatingHyperplane& h, std::span<const double> state);

// Classical signum of the decision value: -1, 0 or +1.
int classify(const SeparatingHyperplane& h, std::span<const double> state);

// Margin width 2/||w||.
double margin(const SeparatingHyperplane& h);

// JSON model file round trip: {"w": [...], "b": .., "K": .., "canon_tol": ..}
void save_model(const SeparatingHyperplane& h, const std::string& path,
                double canon_tol = SolverConfig{}.canon_tol);
SeparatingHyperplane load_model(const std::string& path);

} // namespace otaclass
