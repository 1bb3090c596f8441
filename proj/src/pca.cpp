#include "mpca/pca.hpp"

#include "mpca/distributions.hpp"
#include "mpca/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mpca {

namespace {

constexpr double kEigenFloor = 1e-12;

void check_vector(const Vector& x, std::size_t m, const char* where) {
    if (x.size() != m)
        throw Error(ErrorKind::SchemaMismatch,
                    std::string(where) + ": expected length " + std::to_string(m) +
                        ", got " + std::to_string(x.size()));
    for (double v : x)
        if (!std::isfinite(v))
            throw Error(ErrorKind::InvalidData, std::string(where) + ": non-finite input");
}

// scores = P^T x (length l)
Vector retained_scores(const Vector& x, const PcaSubmodel& model) {
    Vector t(model.l, 0.0);
    for (std::size_t i = 0; i < model.l; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += model.loadings(j, i) * x[j];
        t[i] = s;
    }
    return t;
}

} // namespace

void PcaSubmodel::validate() const {
    const std::size_t m = n_variables();
    if (m == 0 || l < 1 || l >= m)
        throw Error(ErrorKind::InvalidData, "submodel: retained count out of range");
    if (loadings.rows() != m || loadings.cols() != l)
        throw Error(ErrorKind::InvalidData, "submodel: loading matrix shape mismatch");
    if (standardization.size() != m || centroid.size() != m)
        throw Error(ErrorKind::InvalidData, "submodel: parameter length mismatch");
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t k = i; k < l; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += loadings(j, i) * loadings(j, k);
            double expected = i == k ? 1.0 : 0.0;
            if (std::abs(s - expected) >= 1e-8)
                throw Error(ErrorKind::InvalidData, "submodel: loadings not orthonormal");
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (eigenvalues[i] < 0.0 || (i > 0 && eigenvalues[i] > eigenvalues[i - 1]))
            throw Error(ErrorKind::InvalidData, "submodel: eigenvalues not sorted descending");
        sum += eigenvalues[i];
    }
    if (std::abs(sum - static_cast<double>(m)) > 1e-6)
        throw Error(ErrorKind::InvalidData, "submodel: eigenvalue sum differs from trace");
    if (!(t2_limit > 0.0) || !(spe_limit > 0.0) || !(phi_limit > 0.0))
        throw Error(ErrorKind::ModelNotFinalized, "submodel: control limits not set");
    if (!(max_match_distance > 0.0))
        throw Error(ErrorKind::InvalidData, "submodel: match radius not set");
}

PcaFit fit_pca(const Matrix& standardized, double cpv_target) {
    const std::size_t n = standardized.rows();
    const std::size_t m = standardized.cols();
    if (!(cpv_target > 0.0 && cpv_target <= 1.0))
        throw Error(ErrorKind::InvalidParameter, "fit_pca: cpv_target must be in (0,1]");
    if (n <= m)
        throw Error(ErrorKind::InsufficientSamples,
                    "fit_pca: need n > m, got n=" + std::to_string(n) +
                        " m=" + std::to_string(m));
    for (double v : standardized.data())
        if (!std::isfinite(v))
            throw Error(ErrorKind::InvalidData, "fit_pca: non-finite input");

    Matrix corr = gram(standardized, static_cast<double>(n - 1));
    SymmetricEigen eig = jacobi_eigen(corr);

    PcaFit fit;
    fit.eigenvalues = eig.eigenvalues;
    for (double& v : fit.eigenvalues)
        if (v < kEigenFloor) v = 0.0;

    double total = 0.0;
    for (double v : fit.eigenvalues) total += v;
    if (total <= 0.0)
        throw Error(ErrorKind::InvalidData, "fit_pca: zero spectrum");

    std::size_t l = m - 1;
    double cum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        cum += fit.eigenvalues[i];
        if (cum / total >= cpv_target) {
            l = i + 1;
            break;
        }
    }
    fit.l = std::clamp<std::size_t>(l, 1, m - 1);

    fit.loadings = Matrix(m, fit.l);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < fit.l; ++i) fit.loadings(j, i) = eig.eigenvectors(j, i);
    return fit;
}

Projection project(const Vector& x, const PcaSubmodel& model) {
    check_vector(x, model.n_variables(), "project");
    Vector t = retained_scores(x, model);
    Projection p;
    p.x_hat.assign(x.size(), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t i = 0; i < model.l; ++i)
            p.x_hat[j] += model.loadings(j, i) * t[i];
    p.x_tilde.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) p.x_tilde[j] = x[j] - p.x_hat[j];
    return p;
}

double t2_statistic(const Vector& x, const PcaSubmodel& model) {
    check_vector(x, model.n_variables(), "t2_statistic");
    Vector t = retained_scores(x, model);
    double s = 0.0;
    for (std::size_t i = 0; i < model.l; ++i) {
        double lambda = model.eigenvalues[i];
        if (lambda <= kEigenFloor)
            throw Error(ErrorKind::SingularModel,
                        "t2_statistic: retained eigenvalue below tolerance");
        s += t[i] * t[i] / lambda;
    }
    return s;
}

double spe_statistic(const Vector& x, const PcaSubmodel& model) {
    Projection p = project(x, model);
    return norm2(p.x_tilde);
}

double phi_statistic(const Vector& x, const PcaSubmodel& model) {
    if (!(model.t2_limit > 0.0) || !(model.spe_limit > 0.0))
        throw Error(ErrorKind::ModelNotFinalized, "phi_statistic: control limits not set");
    return spe_statistic(x, model) / model.spe_limit + t2_statistic(x, model) / model.t2_limit;
}

IndexTriple compute_indices(const Vector& x, const PcaSubmodel& model) {
    if (!(model.t2_limit > 0.0) || !(model.spe_limit > 0.0))
        throw Error(ErrorKind::ModelNotFinalized, "compute_indices: control limits not set");
    IndexTriple idx;
    idx.t2 = t2_statistic(x, model);
    idx.spe = spe_statistic(x, model);
    idx.phi = idx.spe / model.spe_limit + idx.t2 / model.t2_limit;
    return idx;
}

Matrix phi_matrix(const PcaSubmodel& model) {
    if (!(model.t2_limit > 0.0) || !(model.spe_limit > 0.0))
        throw Error(ErrorKind::ModelNotFinalized, "phi_matrix: control limits not set");
    const std::size_t m = model.n_variables();
    Matrix phi(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            double pcs = 0.0;
            double proj = 0.0;
            for (std::size_t i = 0; i < model.l; ++i) {
                pcs += model.loadings(j, i) * model.loadings(k, i) / model.eigenvalues[i];
                proj += model.loadings(j, i) * model.loadings(k, i);
            }
            double residual = (j == k ? 1.0 : 0.0) - proj;
            phi(j, k) = pcs / model.t2_limit + residual / model.spe_limit;
        }
    }
    return phi;
}

double t2_limit(std::size_t l, std::size_t n, double alpha, LimitVariant variant) {
    if (l < 1 || n <= l)
        throw Error(ErrorKind::InvalidParameter, "t2_limit: need n > l >= 1");
    double ld = static_cast<double>(l);
    double nd = static_cast<double>(n);
    double f = f_inv(ld, nd - ld, alpha);
    double scale;
    if (variant == LimitVariant::standard) {
        scale = ld * (nd - 1.0) * (nd + 1.0) / (nd * (nd - ld));
    } else {
        // as printed: denominator n(n-1), which reduces to l(n+1)/n
        scale = ld * (nd * nd - 1.0) / (nd * (nd - 1.0));
    }
    return scale * f;
}

double spe_limit(const Vector& eigenvalues, std::size_t l, double alpha,
                 LimitVariant h0_variant) {
    if (l >= eigenvalues.size())
        throw Error(ErrorKind::InvalidParameter, "spe_limit: no residual eigenvalues");
    double theta1 = 0.0, theta2 = 0.0, theta3 = 0.0;
    for (std::size_t j = l; j < eigenvalues.size(); ++j) {
        double v = eigenvalues[j];
        theta1 += v;
        theta2 += v * v;
        theta3 += v * v * v;
    }
    if (theta1 <= 1e-12)
        throw Error(ErrorKind::DegenerateResidual,
                    "spe_limit: residual spectrum is numerically empty");

    double h0;
    if (h0_variant == LimitVariant::standard) {
        h0 = 1.0 - 2.0 * theta1 * theta3 / (3.0 * theta2 * theta2);
    } else {
        // as printed: 3*theta1^2 in the denominator
        h0 = 1.0 - 2.0 * theta1 * theta3 / (3.0 * theta1 * theta1);
    }
    double c = normal_inv(alpha);
    double inner = c * std::sqrt(2.0 * theta2 * h0 * h0) / theta1 + 1.0 +
                   theta2 * h0 * (h0 - 1.0) / (theta1 * theta1);
    if (inner <= 0.0)
        throw Error(ErrorKind::DegenerateResidual, "spe_limit: negative base in power");
    return theta1 * std::pow(inner, 1.0 / h0);
}

double phi_limit(const Matrix& correlation, const Matrix& phi_mat, double alpha) {
    Matrix sp = matmul(correlation, phi_mat);
    double tr1 = trace(sp);
    double tr2 = trace(matmul(sp, sp));
    if (tr1 <= 0.0 || tr2 <= 0.0)
        throw Error(ErrorKind::DegenerateResidual, "phi_limit: non-positive trace");
    double g = tr2 / tr1;
    double h = tr1 * tr1 / tr2;
    return g * chi2_inv(h, alpha);
}

double phi_limit(const PcaSubmodel& model, double alpha) {
    if (!(model.t2_limit > 0.0) || !(model.spe_limit > 0.0))
        throw Error(ErrorKind::ModelNotFinalized, "phi_limit: t2/spe limits not set");
    // With S = V diag(lambda) V^T, S*Phi is diagonal in the eigenbasis:
    // lambda_i/(lambda_i t2_limit) = 1/t2_limit on the retained axes and
    // lambda_i/spe_limit on the residual ones.
    double tr1 = 0.0, tr2 = 0.0;
    for (std::size_t i = 0; i < model.n_variables(); ++i) {
        double d = i < model.l ? 1.0 / model.t2_limit
                               : model.eigenvalues[i] / model.spe_limit;
        tr1 += d;
        tr2 += d * d;
    }
    if (tr1 <= 0.0 || tr2 <= 0.0)
        throw Error(ErrorKind::DegenerateResidual, "phi_limit: non-positive trace");
    double g = tr2 / tr1;
    double h = tr1 * tr1 / tr2;
    return g * chi2_inv(h, alpha);
}

PcaSubmodel fit_submodel_core(const Matrix& raw_members, double alpha, double cpv_target,
                              LimitVariant t2_variant, LimitVariant spe_variant) {
    PcaSubmodel model;
    model.n_train = raw_members.rows();
    model.standardization = fit_standardization(raw_members);
    Matrix z = apply_standardization(raw_members, model.standardization);
    PcaFit fit = fit_pca(z, cpv_target);
    model.loadings = std::move(fit.loadings);
    model.eigenvalues = std::move(fit.eigenvalues);
    model.l = fit.l;
    model.t2_limit = t2_limit(model.l, model.n_train, alpha, t2_variant);
    model.spe_limit = spe_limit(model.eigenvalues, model.l, alpha, spe_variant);
    model.phi_limit = phi_limit(model, alpha);
    return model;
}

} // namespace mpca
