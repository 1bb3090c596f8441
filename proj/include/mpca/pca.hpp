#pragma once

#include "mpca/matrix.hpp"
#include "mpca/preprocess.hpp"
#include "mpca/prior_key.hpp"

#include <cstddef>

namespace mpca {

/// The printed limit formulas differ from the standard ones in one factor
/// each; both forms are available, the standard form is the default.
enum class LimitVariant { standard, paper_printed };

/// One operating condition's PCA model: per-condition scaling, retained
/// loadings, the full eigenvalue spectrum of the condition's correlation
/// matrix, control limits, and the centroid used for condition matching.
struct PcaSubmodel {
    int condition_id = 0;
    PriorKey prior_key;
    StandardizationParams standardization;
    Matrix loadings;    // m x l, orthonormal columns, descending eigenvalue order
    Vector eigenvalues; // length m, descending, >= 0
    std::size_t l = 0;  // retained component count, 1 <= l < m
    std::size_t n_train = 0;
    double t2_limit = 0.0;
    double spe_limit = 0.0;
    double phi_limit = 0.0;
    Vector centroid; // in globally standardized space
    double max_match_distance = 0.0;

    std::size_t n_variables() const { return eigenvalues.size(); }
    void validate() const;
};

struct IndexTriple {
    double t2 = 0.0;
    double spe = 0.0;
    double phi = 0.0;
};

struct PcaFit {
    Matrix loadings;    // m x l
    Vector eigenvalues; // length m, descending (values below 1e-12 clamped to 0)
    std::size_t l = 0;
};

struct Projection {
    Vector x_hat;   // projection onto the retained subspace
    Vector x_tilde; // residual
};

/// Eigendecomposition of the sample correlation matrix X^T X / (n-1) of
/// standardized data; retains the smallest l whose cumulative variance
/// fraction reaches cpv_target, clamped to [1, m-1].
PcaFit fit_pca(const Matrix& standardized, double cpv_target = 0.85);

Projection project(const Vector& x, const PcaSubmodel& model);

/// x^T P diag(1/lambda_1..1/lambda_l) P^T x.
double t2_statistic(const Vector& x, const PcaSubmodel& model);

/// ||(I - P P^T) x||^2.
double spe_statistic(const Vector& x, const PcaSubmodel& model);

/// SPE/spe_limit + T2/t2_limit; requires both limits to be set.
double phi_statistic(const Vector& x, const PcaSubmodel& model);

IndexTriple compute_indices(const Vector& x, const PcaSubmodel& model);

/// The combined-index matrix P diag(1/lambda) P^T / t2_limit + (I - PP^T) / spe_limit.
Matrix phi_matrix(const PcaSubmodel& model);

double t2_limit(std::size_t l, std::size_t n, double alpha,
                LimitVariant variant = LimitVariant::standard);

double spe_limit(const Vector& eigenvalues, std::size_t l, double alpha,
                 LimitVariant h0_variant = LimitVariant::standard);

/// Control limit of the combined index: phi is approximated by g * chi2_h with
/// g = tr((S Phi)^2)/tr(S Phi) and h = tr(S Phi)^2/tr((S Phi)^2).
double phi_limit(const Matrix& correlation, const Matrix& phi_mat, double alpha);

/// Same moments computed directly from a model's spectrum; used by the
/// fitting path (the correlation matrix is reconstructed from the full
/// eigendecomposition, under which S Phi is diagonal).
double phi_limit(const PcaSubmodel& model, double alpha);

/// Fit standardization + PCA + all three control limits from one condition's
/// raw (engineering-unit) member rows. Identity fields (condition id, prior
/// key, centroid, match radius) are left for the caller.
PcaSubmodel fit_submodel_core(const Matrix& raw_members, double alpha, double cpv_target,
                              LimitVariant t2_variant = LimitVariant::standard,
                              LimitVariant spe_variant = LimitVariant::standard);

} // namespace mpca
