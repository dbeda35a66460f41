#include "tritrophic/model.hpp"

#include "tritrophic/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tritrophic {

namespace {

double& param_ref(ModelParams& p, Param which) {
    switch (which) {
    case Param::r: return p.r;
    case Param::K: return p.K;
    case Param::a: return p.a;
    case Param::h: return p.h;
    case Param::e: return p.e;
    case Param::m: return p.m;
    case Param::p: return p.p;
    case Param::l: return p.l;
    case Param::b: return p.b;
    case Param::c: return p.c;
    case Param::k: return p.k;
    case Param::q: return p.q;
    case Param::n: return p.n;
    }
    throw std::invalid_argument("unknown parameter");
}

} // namespace

std::string_view param_name(Param which) {
    switch (which) {
    case Param::r: return "r";
    case Param::K: return "K";
    case Param::a: return "a";
    case Param::h: return "h";
    case Param::e: return "e";
    case Param::m: return "m";
    case Param::p: return "p";
    case Param::l: return "l";
    case Param::b: return "b";
    case Param::c: return "c";
    case Param::k: return "k";
    case Param::q: return "q";
    case Param::n: return "n";
    }
    return "?";
}

std::optional<Param> param_from_name(std::string_view name) {
    for (Param p : kAllParams)
        if (param_name(p) == name) return p;
    return std::nullopt;
}

double get_param(const ModelParams& params, Param which) {
    ModelParams copy = params;
    return param_ref(copy, which);
}

ModelParams with_param(ModelParams params, Param which, double value) {
    param_ref(params, which) = value;
    return params;
}

ModelParams validate_params(const ModelParams& raw) {
    for (Param which : kAllParams) {
        const double v = get_param(raw, which);
        const std::string name(param_name(which));
        if (!std::isfinite(v))
            throw ParameterError(ParameterError::Kind::NonFinite, name,
                                 "parameter " + name + " is not finite");
        if (which == Param::b || which == Param::c) {
            if (v < 0)
                throw ParameterError(ParameterError::Kind::NegativeAttraction, name,
                                     "attraction parameter " + name + " must be >= 0");
        } else if (v <= 0) {
            throw ParameterError(ParameterError::Kind::NonPositiveParameter, name,
                                 "parameter " + name + " must be > 0");
        }
    }
    return raw;
}

Matrix3 Matrix3::transposed() const {
    Matrix3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
    return t;
}

Vec3 Matrix3::operator*(const Vec3& v) const {
    Vec3 out{};
    for (int i = 0; i < 3; ++i)
        out[i] = (*this)(i, 0) * v[0] + (*this)(i, 1) * v[1] + (*this)(i, 2) * v[2];
    return out;
}

double Matrix3::determinant() const {
    const auto& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
         - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
         + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

bool Matrix3::all_finite() const {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
}

Vec3 vector_field(const ModelParams& P, const State& s) {
    const auto [x, y, z] = s;
    return {
        P.r * x * (1 - x / P.K) - P.a * x * y / (P.h + x),
        y * (P.a * P.e * x / (P.h + x) - P.m - P.p * z / (P.l + y)),
        x * (P.b + P.c * y / (P.k + y)) + z * (P.p * P.q * y / (P.l + y) - P.n),
    };
}

Matrix3 jacobian(const ModelParams& P, const State& s) {
    const auto [x, y, z] = s;
    const double hx = P.h + x, ly = P.l + y, ky = P.k + y;
    Matrix3 J;
    J(0, 0) = P.r - 2 * P.r * x / P.K - P.a * P.h * y / (hx * hx);
    J(0, 1) = -P.a * x / hx;
    J(0, 2) = 0;
    J(1, 0) = P.a * P.e * P.h * y / (hx * hx);
    J(1, 1) = P.a * P.e * x / hx - P.l * P.p * z / (ly * ly) - P.m;
    J(1, 2) = -P.p * y / ly;
    J(2, 0) = P.b + P.c * y / ky;
    J(2, 1) = P.c * P.k * x / (ky * ky) + P.l * P.p * P.q * z / (ly * ly);
    J(2, 2) = P.p * P.q * y / ly - P.n;
    return J;
}

Matrix3 second_additive_compound(const Matrix3& j) {
    Matrix3 c;
    c(0, 0) = j(0, 0) + j(1, 1);
    c(0, 1) = j(1, 2);
    c(0, 2) = -j(0, 2);
    c(1, 0) = j(2, 1);
    c(1, 1) = j(0, 0) + j(2, 2);
    c(1, 2) = j(0, 1);
    c(2, 0) = -j(2, 0);
    c(2, 1) = j(1, 0);
    c(2, 2) = j(1, 1) + j(2, 2);
    return c;
}

Matrix3 compound_matrix(const ModelParams& params, const State& s) {
    return second_additive_compound(jacobian(params, s));
}

Vec3 second_differential(const ModelParams& P, const State& s, const Vec3& u, const Vec3& v) {
    const auto [x, y, z] = s;
    const double hx = P.h + x, ly = P.l + y, ky = P.k + y;
    const double hx2 = hx * hx, hx3 = hx2 * hx;
    const double ly2 = ly * ly, ly3 = ly2 * ly;
    const double ky2 = ky * ky, ky3 = ky2 * ky;

    // Hessians of each component; only nonzero entries are listed.
    const double f1_xx = -2 * P.r / P.K + 2 * P.a * P.h * y / hx3;
    const double f1_xy = -P.a * P.h / hx2;

    const double f2_xx = -2 * P.a * P.e * P.h * y / hx3;
    const double f2_xy = P.a * P.e * P.h / hx2;
    const double f2_yy = 2 * P.l * P.p * z / ly3;
    const double f2_yz = -P.p * P.l / ly2;

    const double f3_xy = P.c * P.k / ky2;
    const double f3_yy = -2 * P.c * P.k * x / ky3 - 2 * P.l * P.p * P.q * z / ly3;
    const double f3_yz = P.p * P.q * P.l / ly2;

    const double uv_xy = u[0] * v[1] + u[1] * v[0];
    const double uv_yz = u[1] * v[2] + u[2] * v[1];
    return {
        f1_xx * u[0] * v[0] + f1_xy * uv_xy,
        f2_xx * u[0] * v[0] + f2_xy * uv_xy + f2_yy * u[1] * v[1] + f2_yz * uv_yz,
        f3_xy * uv_xy + f3_yy * u[1] * v[1] + f3_yz * uv_yz,
    };
}

Vec3 field_param_derivative(const ModelParams&, const State& s, Param which) {
    switch (which) {
    case Param::m: return {0, -s.y, 0};
    case Param::b: return {0, 0, s.x};
    default: break;
    }
    throw std::invalid_argument("field_param_derivative: only m and b are supported");
}

Matrix3 jacobian_param_derivative(const ModelParams&, const State&, Param which) {
    Matrix3 d;
    switch (which) {
    case Param::m: d(1, 1) = -1; return d;
    case Param::b: d(2, 0) = 1; return d;
    default: break;
    }
    throw std::invalid_argument("jacobian_param_derivative: only m and b are supported");
}

FeasibleRegion feasible_region(const ModelParams& P, double x0) {
    if (!(x0 >= 0)) throw DomainError("feasible_region: x0 must be >= 0");
    FeasibleRegion region;
    region.K1 = std::max(x0, P.K);
    region.delta = std::min({1 / P.e, P.m, P.n});
    region.M = (P.e * P.r + (P.b + P.c) / P.q + 1) * region.K1 / region.delta;
    return region;
}

ModelParams base_params() {
    ModelParams p;
    p.r = 0.1;
    p.K = 1;
    p.h = 0.5;
    p.a = 0.1;
    p.e = 0.4;
    p.m = 0.01;
    p.p = 0.01;
    p.l = 0.5;
    p.b = 0.26;
    p.c = 0.44;
    p.k = 0.5;
    p.q = 0.5;
    p.n = 0.3;
    return p;
}

} // namespace tritrophic
