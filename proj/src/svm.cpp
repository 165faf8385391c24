#include "otaclass/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "otaclass/errors.hpp"

#include <json.hpp>

namespace otaclass {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

// Dual coordinate pair optimizer. Works on flat row-major states so the
// inner products stay cache friendly.
class SmoSolver {
public:
    SmoSolver(const TrainingSet& set, const SolverConfig& cfg)
        : cfg_(cfg),
          n_(set.samples.size()),
          dim_(set.dimension),
          x_(n_ * dim_),
          y_(n_),
          alpha_(n_, 0.0),
          w_(dim_, 0.0),
          b_(0.0) {
        for (std::size_t i = 0; i < n_; ++i) {
            y_[i] = static_cast<double>(set.samples[i].label);
            std::copy(set.samples[i].state.begin(), set.samples[i].state.end(),
                      x_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
        }
    }

    SeparatingHyperplane solve() {
        const std::size_t max_passes = cfg_.max_pass_factor * n_ * n_ + 16;
        bool examine_all = true;
        std::size_t passes = 0;
        bool converged = false;
        while (passes++ < max_passes) {
            std::size_t changed = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (!examine_all && !is_free(i))
                    continue;
                changed += examine(i) ? 1 : 0;
            }
            if (examine_all) {
                if (changed == 0) {
                    converged = true;
                    break;
                }
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
        if (!converged)
            throw NotSeparable("training did not converge within the pass budget; "
                               "the classes are likely not linearly separable");
        for (std::size_t i = 0; i < n_; ++i)
            if (alpha_[i] >= cfg_.penalty * (1.0 - 1e-9))
                throw NotSeparable("a dual multiplier reached the penalty ceiling; "
                                   "the training set is not linearly separable");
        recompute_offset();
        return canonicalize();
    }

private:
    std::span<const double> row(std::size_t i) const {
        return {x_.data() + i * dim_, dim_};
    }

    double f(std::size_t i) const { return dot({w_.data(), dim_}, row(i)) + b_; }

    bool is_free(std::size_t i) const {
        return alpha_[i] > 0.0 && alpha_[i] < cfg_.penalty;
    }

    bool examine(std::size_t i1) {
        const double e1 = f(i1) - y_[i1];
        const double r1 = e1 * y_[i1];
        const bool violates = (r1 < -cfg_.kkt_tol && alpha_[i1] < cfg_.penalty) ||
                              (r1 > cfg_.kkt_tol && alpha_[i1] > 0.0);
        if (!violates)
            return false;

        // Second choice: largest |e1 - e2| among free multipliers, ties to the
        // lowest index so training is reproducible.
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!is_free(i) || i == i1)
                continue;
            const double gap = std::abs(e1 - (f(i) - y_[i]));
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && step(i1, best, e1))
            return true;
        for (std::size_t i = 0; i < n_; ++i)
            if (is_free(i) && i != i1 && step(i1, i, e1))
                return true;
        for (std::size_t i = 0; i < n_; ++i)
            if (i != i1 && step(i1, i, e1))
                return true;
        return false;
    }

    bool step(std::size_t i1, std::size_t i2, double e1) {
        const double y1 = y_[i1], y2 = y_[i2];
        const double a1 = alpha_[i1], a2 = alpha_[i2];
        const double e2 = f(i2) - y2;
        const double s = y1 * y2;

        double lo, hi;
        if (s < 0.0) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(cfg_.penalty, cfg_.penalty + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - cfg_.penalty);
            hi = std::min(cfg_.penalty, a1 + a2);
        }
        if (hi - lo < 1e-16)
            return false;

        const double k11 = dot(row(i1), row(i1));
        const double k22 = dot(row(i2), row(i2));
        const double k12 = dot(row(i1), row(i2));
        const double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > 0.0) {
            a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // Degenerate curvature (duplicate points); evaluate the clipped ends.
            const double f1 = y1 * e1 - a1 * k11 - s * a2 * k12;
            const double f2 = y2 * e2 - a2 * k22 - s * a1 * k12;
            const double l1 = a1 + s * (a2 - lo);
            const double h1 = a1 + s * (a2 - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                  0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                  0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (obj_lo < obj_hi - 1e-12)
                a2_new = lo;
            else if (obj_hi < obj_lo - 1e-12)
                a2_new = hi;
            else
                return false;
        }
        if (std::abs(a2_new - a2) < 1e-14 * (a2_new + a2 + 1e-14))
            return false;

        const double a1_new = a1 + s * (a2 - a2_new);
        const double d1 = y1 * (a1_new - a1);
        const double d2 = y2 * (a2_new - a2);
        for (std::size_t j = 0; j < dim_; ++j)
            w_[j] += d1 * x_[i1 * dim_ + j] + d2 * x_[i2 * dim_ + j];

        const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
        const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
        if (a1_new > 0.0 && a1_new < cfg_.penalty)
            b_ = b1;
        else if (a2_new > 0.0 && a2_new < cfg_.penalty)
            b_ = b2;
        else
            b_ = 0.5 * (b1 + b2);

        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;
        return true;
    }

    // The running offset drifts by rounding over many steps; pin it from the
    // free support vectors (fallback: midpoint between the class extremes).
    void recompute_offset() {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!is_free(i))
                continue;
            sum += y_[i] - dot({w_.data(), dim_}, row(i));
            ++count;
        }
        if (count > 0) {
            b_ = sum / static_cast<double>(count);
            return;
        }
        double neg_max = -std::numeric_limits<double>::infinity();
        double pos_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_; ++i) {
            const double v = dot({w_.data(), dim_}, row(i));
            if (y_[i] > 0.0)
                pos_min = std::min(pos_min, v);
            else
                neg_max = std::max(neg_max, v);
        }
        b_ = -0.5 * (neg_max + pos_min);
    }

    SeparatingHyperplane canonicalize() {
        double closest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_; ++i)
            closest = std::min(closest, std::abs(f(i) - b_ + b_)); // |w.x + b|
        if (!(closest > 0.0) || !std::isfinite(closest))
            throw NotSeparable("optimal hyperplane passes through a training sample");
        SeparatingHyperplane h;
        h.w.resize(dim_);
        for (std::size_t j = 0; j < dim_; ++j)
            h.w[j] = w_[j] / closest;
        h.b = b_ / closest;
        for (std::size_t i = 0; i < n_; ++i) {
            const double m = y_[i] * (dot(h.w, row(i)) + h.b);
            if (m < 1.0 - cfg_.canon_tol)
                throw NotSeparable("a training constraint is violated at the optimum; "
                                   "the training set is not linearly separable");
        }
        return h;
    }

    SolverConfig cfg_;
    std::size_t n_;
    std::size_t dim_;
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> alpha_;
    std::vector<double> w_;
    double b_;
};

} // namespace

void TrainingSet::validate() const {
    if (samples.empty())
        throw DegenerateSet("training set is empty");
    if (dimension == 0)
        throw DimensionMismatch("training set dimension must be positive");
    bool has_pos = false, has_neg = false;
    for (const auto& s : samples) {
        if (s.state.size() != dimension)
            throw DimensionMismatch("sample dimension differs from the set dimension");
        if (s.label != 1 && s.label != -1)
            throw ValidationError("labels must be -1 or +1");
        (s.label == 1 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg)
        throw DegenerateSet("training set must contain both classes");
    const auto& first = samples.front().state;
    bool all_same = true;
    for (const auto& s : samples)
        if (s.state != first) {
            all_same = false;
            break;
        }
    if (all_same)
        throw DegenerateSet("all training states are identical");
}

SeparatingHyperplane train_svm(const TrainingSet& set, const SolverConfig& cfg) {
    set.validate();
    return SmoSolver(set, cfg).solve();
}

double decision_value(const SeparatingHyperplane& h, std::span<const double> state) {
    if (state.size() != h.w.size())
        throw DimensionMismatch("state dimension differs from the hyperplane dimension");
    return dot(h.w, state) + h.b;
}

int classify(const SeparatingHyperplane& h, std::span<const double> state) {
    const double v = decision_value(h, state);
    if (v > 0.0)
        return 1;
    if (v < 0.0)
        return -1;
    return 0;
}

double margin(const SeparatingHyperplane& h) {
    double n2 = 0.0;
    for (double v : h.w)
        n2 += v * v;
    if (n2 <= 0.0)
        throw ZeroNormal("hyperplane normal vector is zero");
    return 2.0 / std::sqrt(n2);
}

void save_model(const SeparatingHyperplane& h, const std::string& path, double canon_tol) {
    nlohmann::json j;
    j["w"] = h.w;
    j["b"] = h.b;
    j["K"] = h.w.size();
    j["canon_tol"] = canon_tol;
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot open model file for writing: " + path);
    out << j.dump(2) << '\n';
}

SeparatingHyperplane load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("model file " + path + ": " + e.what());
    }
    for (const auto& [key, _] : j.items())
        if (key != "w" && key != "b" && key != "K" && key != "canon_tol")
            throw ValidationError("model file " + path + ": unknown key '" + key + "'");
    if (!j.contains("w") || !j.contains("b"))
        throw ValidationError("model file " + path + ": missing 'w' or 'b'");
    SeparatingHyperplane h;
    h.w = j.at("w").get<std::vector<double>>();
    h.b = j.at("b").get<double>();
    if (j.contains("K") && j.at("K").get<std::size_t>() != h.w.size())
        throw ValidationError("model file " + path + ": K disagrees with len(w)");
    bool all_zero = true;
    for (double v : h.w)
        if (v != 0.0)
            all_zero = false;
    if (h.w.empty() || all_zero)
        throw ValidationError("model file " + path + ": normal vector is zero");
    return h;
}

} // namespace otaclass
