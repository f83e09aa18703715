#ifndef TSINFO_DIGAMMA_HPP
#define TSINFO_DIGAMMA_HPP

namespace tsinfo {

/// psi(x) for x > 0, accurate to better than 1e-10 absolute over
/// [1e-3, 1e6]. Throws DomainError for x <= 0.
double digamma(double x);

}  // namespace tsinfo

#endif  // TSINFO_DIGAMMA_HPP
