#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dynerg {

// Streaming mean/covariance plus shifted power sums for third/fourth moments.
// Mergeable: merging two accumulators matches accumulating the concatenation.
class MomentAccumulator {
  public:
    explicit MomentAccumulator(std::size_t dim);

    std::size_t dimension() const { return dim_; }
    long count() const { return n_; }

    void accumulate(const std::vector<double>& sample);
    void merge(const MomentAccumulator& other);

    double mean(std::size_t a) const;
    double mean_se(std::size_t a) const;
    double covariance(std::size_t a, std::size_t b) const;  // unbiased
    double variance(std::size_t a) const { return covariance(a, a); }
    double correlation(std::size_t a, std::size_t b) const;  // 0 when degenerate
    double skewness(std::size_t a) const;
    double kurtosis(std::size_t a) const;

    // Standard error of the covariance entry estimate, distribution-free
    // fourth-moment form sqrt((q_ab - c_ab^2)/n).
    double covariance_se(std::size_t a, std::size_t b) const;

    Eigen::MatrixXd covariance_matrix() const;

  private:
    void require_coord(std::size_t a) const;
    double central2(std::size_t a, std::size_t b) const;   // sum (x_a-m_a)(x_b-m_b)
    double central22(std::size_t a, std::size_t b) const;  // sum (..)^2 (..)^2

    std::size_t dim_;
    long n_ = 0;
    Eigen::VectorXd shift_;  // first sample; keeps power sums well-conditioned
    Eigen::VectorXd mean_;
    Eigen::MatrixXd m2_;  // Welford co-moment sums
    Eigen::VectorXd s1_, s3_, s4_;
    Eigen::MatrixXd p2_, r21_, q22_;  // r21(a,b) = sum u_a^2 u_b
};

struct CovarianceComparison {
    Eigen::MatrixXd z;  // per-entry z-scores
    double max_abs_z = 0.0;
    bool pass = false;
    std::vector<std::string> notes;
};

// z = (empirical - reference)/se per entry; pass iff max |z| < threshold.
CovarianceComparison compare_covariance(const MomentAccumulator& acc,
                                        const Eigen::MatrixXd& reference,
                                        double threshold = 5.0);

}  // namespace dynerg
