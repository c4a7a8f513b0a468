#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace foct {

// Seven-label scheme used throughout: NL NM NS ZR PS PM PL.
enum class Label : int { NL = 0, NM, NS, ZR, PS, PM, PL };

inline constexpr std::array<const char*, 7> kLabelNames = {
    "NL", "NM", "NS", "ZR", "PS", "PM", "PL"};

inline Label negate(Label l) { return static_cast<Label>(6 - static_cast<int>(l)); }

struct TriangularMF {
    double left = 0.0;
    double center = 0.0;
    double right = 0.0;

    // 1 at the center, 0 outside [left, right], linear in between.
    // Degenerate shoulders (left == center or center == right) are allowed
    // at the universe edges.
    double membership(double x) const {
        if (x < left || x > right) return 0.0;
        if (x == center) return 1.0;
        if (x < center) return (x - left) / (center - left);
        return (right - x) / (right - center);
    }
};

struct LinguisticPartition {
    std::array<TriangularMF, 7> mfs{};

    std::array<double, 7> fuzzify(double x) const {
        std::array<double, 7> degrees{};
        for (std::size_t i = 0; i < 7; ++i) degrees[i] = mfs[i].membership(x);
        return degrees;
    }
};

// Seven evenly spaced triangles over [-1, 1] with centers at k/3 and feet at
// the neighboring centers; the edge labels degenerate into shoulders.
inline LinguisticPartition standard_partition() {
    std::array<double, 7> c{};
    for (int k = -3; k <= 3; ++k) c[static_cast<std::size_t>(k + 3)] = k / 3.0;
    LinguisticPartition p;
    for (std::size_t i = 0; i < 7; ++i) {
        p.mfs[i].left = c[i > 0 ? i - 1 : 0];
        p.mfs[i].center = c[i];
        p.mfs[i].right = c[i < 6 ? i + 1 : 6];
    }
    return p;
}

// Build a partition from seven ascending centers, same foot rule as above.
inline LinguisticPartition partition_from_centers(const std::array<double, 7>& c) {
    for (std::size_t i = 1; i < 7; ++i)
        if (!(c[i] > c[i - 1]))
            throw std::invalid_argument("partition centers must be strictly increasing");
    LinguisticPartition p;
    for (std::size_t i = 0; i < 7; ++i) {
        p.mfs[i].left = c[i > 0 ? i - 1 : 0];
        p.mfs[i].center = c[i];
        p.mfs[i].right = c[i < 6 ? i + 1 : 6];
    }
    return p;
}

// 7x7 output-label grid indexed by (rate label, error label), both canonical
// NL..PL order.
class RuleBase {
public:
    RuleBase() = default;

    // `printed` rows run rate = PL (top) down to NL, columns error = NL..PL,
    // matching the usual tabular presentation of such rule bases.
    static RuleBase from_printed_grid(const std::array<std::array<Label, 7>, 7>& printed) {
        RuleBase rb;
        for (std::size_t row = 0; row < 7; ++row)
            for (std::size_t col = 0; col < 7; ++col)
                rb.table_[6 - row][col] = printed[row][col];
        return rb;
    }

    Label output(Label rate, Label error) const {
        return table_[static_cast<std::size_t>(rate)][static_cast<std::size_t>(error)];
    }

    void set_output(Label rate, Label error, Label out) {
        table_[static_cast<std::size_t>(rate)][static_cast<std::size_t>(error)] = out;
    }

    bool antisymmetric() const {
        for (int r = 0; r < 7; ++r)
            for (int c = 0; c < 7; ++c) {
                const Label a = output(static_cast<Label>(r), static_cast<Label>(c));
                const Label b = output(negate(static_cast<Label>(r)),
                                       negate(static_cast<Label>(c)));
                if (negate(a) != b) return false;
            }
        return true;
    }

    bool monotone() const {
        for (int r = 0; r < 7; ++r)
            for (int c = 0; c < 7; ++c) {
                const int v = static_cast<int>(output(static_cast<Label>(r),
                                                      static_cast<Label>(c)));
                if (c + 1 < 7 &&
                    static_cast<int>(output(static_cast<Label>(r),
                                            static_cast<Label>(c + 1))) < v)
                    return false;
                if (r + 1 < 7 &&
                    static_cast<int>(output(static_cast<Label>(r + 1),
                                            static_cast<Label>(c))) < v)
                    return false;
            }
        return true;
    }

private:
    std::array<std::array<Label, 7>, 7> table_{};  // [rate][error]
};

// The fixed linear rule base: output saturates toward NL/PL in the corners
// and is ZR on the cancelling anti-diagonal.
inline RuleBase standard_rule_base() {
    using enum Label;
    return RuleBase::from_printed_grid({{
        {ZR, PS, PM, PL, PL, PL, PL},   // rate = PL
        {NS, ZR, PS, PM, PL, PL, PL},   // rate = PM
        {NM, NS, ZR, PS, PM, PL, PL},   // rate = PS
        {NL, NM, NS, ZR, PS, PM, PL},   // rate = ZR
        {NL, NL, NM, NS, ZR, PS, PM},   // rate = NS
        {NL, NL, NL, NM, NS, ZR, PS},   // rate = NM
        {NL, NL, NL, NL, NM, NS, ZR},   // rate = NL
    }});
}

// Mamdani engine: min activation, min implication (clipping), max
// aggregation, centroid over a uniform grid on [-1, 1]. Immutable after
// construction, so evaluation is safe from any number of threads.
class FuzzyEngine {
public:
    FuzzyEngine(LinguisticPartition error_partition,
                LinguisticPartition rate_partition,
                LinguisticPartition output_partition, RuleBase rules,
                int grid_points = 1001)
        : error_(error_partition),
          rate_(rate_partition),
          output_(output_partition),
          rules_(rules) {
        if (grid_points < 3)
            throw std::invalid_argument("FuzzyEngine: need at least 3 grid points");
        const std::size_t n = static_cast<std::size_t>(grid_points);
        grid_.resize(n);
        // integer numerators keep the grid exactly negation-symmetric
        for (std::size_t i = 0; i < n; ++i)
            grid_[i] = static_cast<double>(2.0 * i - (n - 1)) / static_cast<double>(n - 1);
        for (std::size_t l = 0; l < 7; ++l) {
            mf_grid_[l].resize(n);
            for (std::size_t i = 0; i < n; ++i)
                mf_grid_[l][i] = output_.mfs[l].membership(grid_[i]);
        }
    }

    static FuzzyEngine standard(int grid_points = 1001) {
        const auto p = standard_partition();
        return FuzzyEngine(p, p, p, standard_rule_base(), grid_points);
    }

    // u_FLC from scaled error and scaled error rate; inputs are clamped to
    // the universe so out-of-range arguments stay meaningful.
    double evaluate(double e_scaled, double rate_scaled) const {
        const double e = std::clamp(e_scaled, -1.0, 1.0);
        const double r = std::clamp(rate_scaled, -1.0, 1.0);
        const auto de = error_.fuzzify(e);
        const auto dr = rate_.fuzzify(r);

        std::array<double, 7> activation{};
        for (int i = 0; i < 7; ++i) {
            if (de[static_cast<std::size_t>(i)] <= 0.0) continue;
            for (int j = 0; j < 7; ++j) {
                if (dr[static_cast<std::size_t>(j)] <= 0.0) continue;
                const Label out = rules_.output(static_cast<Label>(j), static_cast<Label>(i));
                const double w = std::min(de[static_cast<std::size_t>(i)],
                                          dr[static_cast<std::size_t>(j)]);
                auto& a = activation[static_cast<std::size_t>(out)];
                a = std::max(a, w);
            }
        }

        // trapezoid-weighted centroid of the max-aggregated clipped sets
        double num = 0.0, den = 0.0;
        const std::size_t n = grid_.size();
        for (std::size_t i = 0; i < n; ++i) {
            double m = 0.0;
            for (std::size_t l = 0; l < 7; ++l) {
                if (activation[l] <= m) continue;
                m = std::max(m, std::min(activation[l], mf_grid_[l][i]));
            }
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            num += w * grid_[i] * m;
            den += w * m;
        }
        if (den <= 0.0) return 0.0;
        return num / den;
    }

    int grid_points() const { return static_cast<int>(grid_.size()); }
    const RuleBase& rules() const { return rules_; }
    const LinguisticPartition& error_partition() const { return error_; }
    const LinguisticPartition& rate_partition() const { return rate_; }
    const LinguisticPartition& output_partition() const { return output_; }

private:
    LinguisticPartition error_, rate_, output_;
    RuleBase rules_;
    std::vector<double> grid_;
    std::array<std::vector<double>, 7> mf_grid_;
};

inline FuzzyEngine build_standard_engine(int grid_points = 1001) {
    return FuzzyEngine::standard(grid_points);
}

}  // namespace foct
