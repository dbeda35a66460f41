#pragma once

// Crop / aphid / natural-enemy model with VOC-mediated predator attraction:
//
//   dx/dt = r x (1 - x/K) - a x y / (h + x)
//   dy/dt = y (a e x / (h + x) - m - p z / (l + y))
//   dz/dt = x (b + c y / (k + y)) + z (p q y / (l + y) - n)

#include <array>
#include <optional>
#include <string_view>

namespace tritrophic {

/// The 13 rate and saturation constants. Construct through validate_params()
/// when the values come from outside the program.
struct ModelParams {
    double r = 0;  ///< crop growth rate
    double K = 0;  ///< crop carrying capacity
    double a = 0;  ///< maximal harvesting rate of crop by aphids
    double h = 0;  ///< half saturation (crop)
    double e = 0;  ///< crop to aphid conversion
    double m = 0;  ///< aphid mortality
    double p = 0;  ///< maximal predation rate
    double l = 0;  ///< half saturation (aphid, predation)
    double b = 0;  ///< VOC attraction constant
    double c = 0;  ///< aphid-enhanced attraction rate
    double k = 0;  ///< half saturation (aphid, attraction)
    double q = 0;  ///< aphid to predator conversion
    double n = 0;  ///< predator mortality

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class Param { r, K, a, h, e, m, p, l, b, c, k, q, n };

inline constexpr std::array<Param, 13> kAllParams = {
    Param::r, Param::K, Param::a, Param::h, Param::e, Param::m, Param::p,
    Param::l, Param::b, Param::c, Param::k, Param::q, Param::n};

std::string_view param_name(Param which);
std::optional<Param> param_from_name(std::string_view name);
double get_param(const ModelParams& params, Param which);
ModelParams with_param(ModelParams params, Param which, double value);

/// Throws ParameterError unless r, K, a, h, e, m, p, l, k, q, n > 0 and b, c >= 0.
ModelParams validate_params(const ModelParams& raw);

struct State {
    double x = 0;  ///< crop
    double y = 0;  ///< aphid
    double z = 0;  ///< natural enemy

    friend bool operator==(const State&, const State&) = default;
};

using Vec3 = std::array<double, 3>;

inline Vec3 to_vec(const State& s) { return {s.x, s.y, s.z}; }
inline State to_state(const Vec3& v) { return {v[0], v[1], v[2]}; }

/// Dense 3x3 matrix, row-major, zero-based indices.
class Matrix3 {
public:
    Matrix3() = default;
    explicit Matrix3(const std::array<double, 9>& entries) : a_(entries) {}

    double& operator()(int i, int j) { return a_[3 * i + j]; }
    double operator()(int i, int j) const { return a_[3 * i + j]; }

    const std::array<double, 9>& data() const { return a_; }
    Matrix3 transposed() const;
    Vec3 operator*(const Vec3& v) const;
    double trace() const { return a_[0] + a_[4] + a_[8]; }
    double determinant() const;
    bool all_finite() const;

private:
    std::array<double, 9> a_{};
};

/// Absorbing region x <= K1, e x + y + z/q <= M.
struct FeasibleRegion {
    double K1 = 0;
    double delta = 0;
    double M = 0;
};

Vec3 vector_field(const ModelParams& params, const State& s);

/// Analytic Jacobian. The (0,0) entry uses the consolidated form
/// r - 2rx/K - a h y / (h + x)^2.
Matrix3 jacobian(const ModelParams& params, const State& s);

/// Second additive compound of a 3x3 matrix; its spectrum is the set of
/// pairwise sums of the eigenvalues of the argument.
Matrix3 second_additive_compound(const Matrix3& j);

Matrix3 compound_matrix(const ModelParams& params, const State& s);

/// Symmetric second differential D^2 f(s)(u, v).
Vec3 second_differential(const ModelParams& params, const State& s, const Vec3& u,
                         const Vec3& v);

/// Partial derivative of the vector field with respect to a parameter.
/// Only m and b are supported; other parameters raise std::invalid_argument.
Vec3 field_param_derivative(const ModelParams& params, const State& s, Param which);

/// Partial derivative of the Jacobian with respect to m or b at fixed state.
Matrix3 jacobian_param_derivative(const ModelParams& params, const State& s, Param which);

FeasibleRegion feasible_region(const ModelParams& params, double x0);

/// Base parameter set of the numerical examples (b = 0.26).
ModelParams base_params();

} // namespace tritrophic
