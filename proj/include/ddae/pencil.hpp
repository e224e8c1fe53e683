#ifndef DDAE_PENCIL_HPP
#define DDAE_PENCIL_HPP

#include <optional>

#include "ddae/linalg.hpp"

namespace ddae
{

///
/// Square matrix pencil (E, A) of dimension n >= 1.
///
template <typename Scalar>
class MatrixPencil
{
public:
    /// Throws DimensionMismatch unless E and A are square, nonempty and of
    /// equal size.
    MatrixPencil(Matrix<Scalar> E, Matrix<Scalar> A);

    const Matrix<Scalar>& E() const { return E_; }
    const Matrix<Scalar>& A() const { return A_; }
    Index n() const { return E_.rows(); }

private:
    Matrix<Scalar> E_;
    Matrix<Scalar> A_;
};

/// Outcome of the determinant sampling test.
struct RegularityVerdict
{
    bool regular = false;
    /// First sample point lambda_j = j*s at which lambda*E - A was
    /// numerically nonsingular (only meaningful when regular).
    double witness = 0.0;
    /// |det(witness*E - A)|, or the largest sampled magnitude when singular.
    double determinant_magnitude = 0.0;
    /// Sample spacing s = (1 + |A|) / (1 + |E|).
    double sample_scale = 1.0;
};

/// Samples det(lambda*E - A) at lambda_j = j*s, j = 0..n. A nonzero
/// polynomial of degree <= n cannot vanish at all n+1 points.
template <typename Scalar>
RegularityVerdict check_regularity(const MatrixPencil<Scalar>& p,
                                   const RankPolicy& policy = {});

/// Limits V* and W* of the Wong sequences as orthonormal column bases.
template <typename Scalar>
struct WongSubspaces
{
    Matrix<Scalar> V; // n x n_d
    Matrix<Scalar> W; // n x n_a
    /// Some rank decision was within a factor 10 of its threshold.
    bool rank_ambiguous = false;
    int iterations_v = 0;
    int iterations_w = 0;
};

/// Throws SingularPencil for irregular pencils and DecompositionFailure if
/// the limits do not span the full space.
template <typename Scalar>
WongSubspaces<Scalar> wong_sequences(const MatrixPencil<Scalar>& p,
                                     const RankPolicy& policy = {});

/// Result of nilpotency_index.
struct Nilpotency
{
    bool nilpotent = false;
    std::optional<int> index;
};

/// Smallest k <= m with |N^k| <= rel_tol * (1 + |N|^k); m = 0 gives (true, 0).
template <typename Scalar>
Nilpotency nilpotency_index(const Matrix<Scalar>& N,
                            const RankPolicy& policy = {});

///
/// Quasi-Weierstrass form  S E T = diag(I, N),  S A T = diag(J, I).
///
template <typename Scalar>
struct QuasiWeierstrassForm
{
    Matrix<Scalar> S;
    Matrix<Scalar> T;
    Matrix<Scalar> T_inv;
    Matrix<Scalar> J;
    Matrix<Scalar> N;
    Index n_d = 0;
    Index n_a = 0;
    /// Index of the pencil; 0 when n_a == 0.
    int nu = 0;
    bool rank_ambiguous = false;
    /// max of the E- and A-side reconstruction residuals.
    double reconstruction_residual = 0.0;

    Index n() const { return n_d + n_a; }
};

template <typename Scalar>
QuasiWeierstrassForm<Scalar> compute_qwf(const MatrixPencil<Scalar>& p,
                                         const RankPolicy& policy = {});

/// Reconstruction tolerance 1e-8 * (1 + |E| + |A|) shared by tests and
/// compute_qwf.
template <typename Scalar>
double reconstruction_tolerance(const MatrixPencil<Scalar>& p);

} // namespace ddae

#endif
