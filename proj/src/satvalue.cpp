#include "pb/satvalue.hpp"

#include <cmath>

namespace pb {

namespace {

int sign_cmp(const Rat& a, const Rat& b) {
    return a < b ? -1 : a > b ? 1 : 0;
}

} // namespace

int SatValue::cmp(const SatValue& o) const {
    if (is_zero() && o.is_zero()) return 0;
    if (is_zero()) return -1; // all nonzero satisfaction values are positive
    if (o.is_zero()) return 1;
    if (scale_ == o.scale_) return sign_cmp(v_, o.v_);
    // Lin a vs Sqrt b: a, b > 0, so a <=> sqrt(b) iff a^2 <=> b.
    if (scale_ == Scale::Lin && o.scale_ == Scale::Sqrt)
        return sign_cmp(Rat(v_ * v_), o.v_);
    if (scale_ == Scale::Sqrt && o.scale_ == Scale::Lin)
        return sign_cmp(v_, Rat(o.v_ * o.v_));
    throw Error("IncomparableScales",
                "cannot exactly compare a logarithmic satisfaction value with a value on "
                "another scale");
}

SatValue& SatValue::operator+=(const SatValue& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
        *this = o;
        return *this;
    }
    if (scale_ == Scale::Lin && o.scale_ == Scale::Lin) {
        v_ += o.v_;
        return *this;
    }
    if (scale_ == Scale::Log && o.scale_ == Scale::Log) {
        v_ *= o.v_; // log x + log y = log xy
        return *this;
    }
    throw Error("UnsupportedSatisfactionAlgebra",
                "sum of sqrt-scale satisfaction values has no exact representation");
}

SatValue& SatValue::operator*=(const SatValue& o) {
    if (is_zero() || o.is_zero()) {
        *this = SatValue();
        return *this;
    }
    if (scale_ == Scale::Log || o.scale_ == Scale::Log)
        throw Error("UnsupportedSatisfactionAlgebra",
                    "product involving log-scale satisfaction values has no exact "
                    "representation");
    if (scale_ == Scale::Lin && o.scale_ == Scale::Lin) {
        v_ *= o.v_;
    } else if (scale_ == Scale::Sqrt && o.scale_ == Scale::Sqrt) {
        v_ *= o.v_; // sqrt x * sqrt y = sqrt xy
    } else {
        // a * sqrt(b) = sqrt(a^2 b)
        const Rat& lin = scale_ == Scale::Lin ? v_ : o.v_;
        const Rat& rad = scale_ == Scale::Lin ? o.v_ : v_;
        v_ = lin * lin * rad;
        scale_ = Scale::Sqrt;
    }
    return *this;
}

std::string SatValue::str() const {
    switch (scale_) {
    case Scale::Lin: return rat_frac(v_);
    case Scale::Sqrt: return "sqrt(" + rat_frac(v_) + ")";
    case Scale::Log: return "log(" + rat_frac(v_) + ")";
    }
    return "?";
}

double SatValue::approx() const {
    double x = v_.get_d();
    switch (scale_) {
    case Scale::Lin: return x;
    case Scale::Sqrt: return std::sqrt(x);
    case Scale::Log: return std::log(x);
    }
    return 0;
}

} // namespace pb
