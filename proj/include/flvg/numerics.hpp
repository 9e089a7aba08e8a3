#pragma once

#include <stdexcept>

namespace flvg::numerics {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Validated arguments of the regularized incomplete beta function.
class BetaParams {
public:
    BetaParams(double a, double b, double x);

    double a() const { return a_; }
    double b() const { return b_; }
    double x() const { return x_; }

private:
    double a_;
    double b_;
    double x_;
};

/// Regularized incomplete beta I_x(a, b).
///
/// Evaluated with the modified Lentz continued fraction; for x above
/// (a + 1) / (a + b + 2) the symmetric form 1 - I_{1-x}(b, a) is used so the
/// fraction always converges quickly.
double reg_inc_beta(const BetaParams& p);
double reg_inc_beta(double a, double b, double x);

/// Survival function P(T > t) of Student's t with `dof` degrees of freedom.
/// `dof` may be non-integer (Welch–Satterthwaite).
double student_t_sf(double t, double dof);

}  // namespace flvg::numerics
