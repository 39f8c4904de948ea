#pragma once

#include "pb/error.hpp"
#include "pb/rational.hpp"

#include <string>

namespace pb {

// Satisfaction values live on one of three scales so that sqrt/log
// satisfaction stays exact: a value is either v (Lin), sqrt(v) (Sqrt, v = the
// squared value), or log(v) (Log, v = the exponentiated value, v >= 1).
// Zero is always normalized to (Lin, 0), so scales only meet on positives.
//
// Exactly representable operations:
//   compare: same scale (monotone transform), Lin vs Sqrt (square both sides);
//   add:     Lin+Lin, Log+Log (multiply stored values);
//   mul:     Lin*Lin, Lin*Sqrt, Sqrt*Sqrt (push squares into the radicand).
// Anything else throws; callers reject those rule/satisfaction combinations
// up front with a clear message.
enum class Scale { Lin, Sqrt, Log };

class SatValue {
public:
    SatValue() : scale_(Scale::Lin), v_(0) {}

    static SatValue lin(Rat v) { return SatValue(Scale::Lin, std::move(v)); }
    static SatValue sqrt_of(Rat v) {
        if (v < 0) throw Error("BadSatValue", "sqrt of negative");
        return v == 0 ? SatValue() : SatValue(Scale::Sqrt, std::move(v));
    }
    static SatValue log_of(Rat v) {
        if (v < 1) throw Error("BadSatValue", "log of value below 1");
        return v == 1 ? SatValue() : SatValue(Scale::Log, std::move(v));
    }

    Scale scale() const { return scale_; }
    const Rat& stored() const { return v_; }
    bool is_zero() const { return scale_ == Scale::Lin && v_ == 0; }

    // Total on comparable scales; throws Error("IncomparableScales") when a
    // Log value meets a nonzero value on another scale.
    int cmp(const SatValue& o) const;

    bool operator==(const SatValue& o) const { return cmp(o) == 0; }
    bool operator!=(const SatValue& o) const { return cmp(o) != 0; }
    bool operator<(const SatValue& o) const { return cmp(o) < 0; }
    bool operator<=(const SatValue& o) const { return cmp(o) <= 0; }
    bool operator>(const SatValue& o) const { return cmp(o) > 0; }
    bool operator>=(const SatValue& o) const { return cmp(o) >= 0; }

    // Throws Error("UnsupportedSatisfactionAlgebra") for sums/products that
    // have no exact representation on these scales.
    SatValue& operator+=(const SatValue& o);
    SatValue& operator*=(const SatValue& o);
    friend SatValue operator+(SatValue a, const SatValue& b) { return a += b; }
    friend SatValue operator*(SatValue a, const SatValue& b) { return a *= b; }

    // "3/2", "sqrt(2)", "log(27/8)"; exact, parse-stable for reports.
    std::string str() const;
    // For humans only; never used in decisions.
    double approx() const;

private:
    SatValue(Scale s, Rat v) : scale_(s), v_(std::move(v)) {}
    Scale scale_;
    Rat v_;
};

} // namespace pb
