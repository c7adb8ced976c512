#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace semirev {

class NearSingularError : public std::runtime_error {
 public:
  explicit NearSingularError(const std::string& msg) : std::runtime_error(msg) {}
};

// LU factorization with partial pivoting of a banded matrix with kl sub- and
// ku super-diagonals, LAPACK band layout with kl extra rows of fill-in.
// Factor once, then solve against A and A^H any number of times.
template <typename Scalar>
class BandedLU {
 public:
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  // ab(kl + ku + i - j, j) = A(i, j); rows 0..kl-1 are workspace for fill-in
  BandedLU(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ab, int kl,
           int ku, const std::string& label = {})
      : ab_(std::move(ab)), kl_(kl), ku_(ku), n_(static_cast<int>(ab_.cols())) {
    if (ab_.rows() != 2 * kl_ + ku_ + 1)
      throw std::invalid_argument("BandedLU: band storage must have 2kl+ku+1 rows");
    factor(label);
  }

  int size() const { return n_; }

  Vector solve(const Vector& b) const {
    Vector x = b;
    solve_in_place(x);
    return x;
  }

  void solve_in_place(Vector& b) const {
    const int bw = kl_ + ku_;
    for (int j = 0; j < n_; ++j) {
      if (ipiv_[j] != j) std::swap(b[j], b[ipiv_[j]]);
      const int iend = std::min(n_ - 1, j + kl_);
      for (int i = j + 1; i <= iend; ++i) b[i] -= at(i, j) * b[j];
    }
    for (int j = n_ - 1; j >= 0; --j) {
      b[j] /= at(j, j);
      const int ibeg = std::max(0, j - bw);
      for (int i = ibeg; i < j; ++i) b[i] -= at(i, j) * b[j];
    }
  }

  // solves A^H x = b reusing the factorization of A
  Vector solve_adjoint(const Vector& b) const {
    Vector x = b;
    solve_adjoint_in_place(x);
    return x;
  }

  void solve_adjoint_in_place(Vector& b) const {
    using Eigen::numext::conj;
    const int bw = kl_ + ku_;
    // U^H w = b (lower triangular, bandwidth kl+ku)
    for (int j = 0; j < n_; ++j) {
      Scalar s = b[j];
      const int ibeg = std::max(0, j - bw);
      for (int i = ibeg; i < j; ++i) s -= conj(at(i, j)) * b[i];
      b[j] = s / conj(at(j, j));
    }
    // L^H y = w (unit upper triangular, bandwidth kl)
    for (int j = n_ - 1; j >= 0; --j) {
      const int iend = std::min(n_ - 1, j + kl_);
      for (int i = j + 1; i <= iend; ++i) b[j] -= conj(at(i, j)) * b[i];
      if (ipiv_[j] != j) std::swap(b[j], b[ipiv_[j]]);
    }
  }

 private:
  Scalar& at(int i, int j) { return ab_(kl_ + ku_ + i - j, j); }
  const Scalar& at(int i, int j) const { return ab_(kl_ + ku_ + i - j, j); }

  void factor(const std::string& label) {
    using std::abs;
    ipiv_.resize(n_);
    Real scale = 0;
    for (int j = 0; j < n_; ++j)
      for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
        scale = std::max(scale, abs(at(i, j)));
    const Real tiny = Real(1e-14) * scale;
    const int bw = kl_ + ku_;

    for (int j = 0; j < n_; ++j) {
      int piv = j;
      Real best = abs(at(j, j));
      const int iend = std::min(n_ - 1, j + kl_);
      for (int i = j + 1; i <= iend; ++i)
        if (abs(at(i, j)) > best) best = abs(at(i, j)), piv = i;
      ipiv_[j] = piv;
      if (best <= tiny) {
        std::ostringstream os;
        os << "BandedLU: near-singular pivot at column " << j;
        if (!label.empty()) os << " (" << label << ")";
        throw NearSingularError(os.str());
      }
      if (piv != j) {
        const int cend = std::min(n_ - 1, j + bw);
        for (int c = j; c <= cend; ++c) std::swap(at(j, c), at(piv, c));
      }
      const Scalar pivot = at(j, j);
      for (int i = j + 1; i <= iend; ++i) {
        const Scalar m = at(i, j) / pivot;
        at(i, j) = m;
        const int cend = std::min(n_ - 1, j + bw);
        for (int c = j + 1; c <= cend; ++c) at(i, c) -= m * at(j, c);
      }
    }
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ab_;
  int kl_, ku_, n_;
  std::vector<int> ipiv_;
};

// Band storage for a symmetric pentadiagonal matrix given by its diagonals,
// shifted by -z: band(A - z I).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pentadiagonal_band(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& diag,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& off1,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& off2, Scalar z) {
  const int n = static_cast<int>(diag.size());
  const int kl = 2, ku = 2;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ab =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * kl + ku + 1, n);
  for (int j = 0; j < n; ++j) {
    ab(kl + ku, j) = diag[j] - z;
    if (j >= 1) ab(kl + ku + 1, j - 1) = off1[j - 1];   // A(j, j-1)
    if (j >= 1) ab(kl + ku - 1, j) = off1[j - 1];       // A(j-1, j)
    if (j >= 2) ab(kl + ku + 2, j - 2) = off2[j - 2];   // A(j, j-2)
    if (j >= 2) ab(kl + ku - 2, j) = off2[j - 2];       // A(j-2, j)
  }
  return ab;
}

}  // namespace semirev
