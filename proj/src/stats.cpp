#include "dynerg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynerg {

MomentAccumulator::MomentAccumulator(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("dimension must be positive");
    const auto d = static_cast<Eigen::Index>(dim);
    shift_ = Eigen::VectorXd::Zero(d);
    mean_ = Eigen::VectorXd::Zero(d);
    m2_ = Eigen::MatrixXd::Zero(d, d);
    s1_ = Eigen::VectorXd::Zero(d);
    s3_ = Eigen::VectorXd::Zero(d);
    s4_ = Eigen::VectorXd::Zero(d);
    p2_ = Eigen::MatrixXd::Zero(d, d);
    r21_ = Eigen::MatrixXd::Zero(d, d);
    q22_ = Eigen::MatrixXd::Zero(d, d);
}

void MomentAccumulator::require_coord(std::size_t a) const {
    if (a >= dim_) throw std::out_of_range("coordinate index");
}

void MomentAccumulator::accumulate(const std::vector<double>& sample) {
    if (sample.size() != dim_) throw std::invalid_argument("sample dimension mismatch");
    const auto d = static_cast<Eigen::Index>(dim_);
    Eigen::VectorXd x(d);
    for (Eigen::Index i = 0; i < d; ++i) x[i] = sample[static_cast<std::size_t>(i)];

    if (n_ == 0) shift_ = x;
    ++n_;

    const Eigen::VectorXd delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_).transpose();

    const Eigen::VectorXd u = x - shift_;
    const Eigen::VectorXd u2 = u.cwiseProduct(u);
    s1_ += u;
    s3_ += u2.cwiseProduct(u);
    s4_ += u2.cwiseProduct(u2);
    p2_ += u * u.transpose();
    r21_ += u2 * u.transpose();
    q22_ += u2 * u2.transpose();
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch in merge");
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;

    // Translate the other accumulator's power sums to this shift.
    const Eigen::VectorXd d = other.shift_ - shift_;  // u_new = u_old + d
    const Eigen::VectorXd o_s1 = other.s1_ + nb * d;
    Eigen::MatrixXd o_p2 = other.p2_;
    Eigen::VectorXd o_s3 = other.s3_;
    Eigen::VectorXd o_s4 = other.s4_;
    Eigen::MatrixXd o_r21 = other.r21_;
    Eigen::MatrixXd o_q22 = other.q22_;
    const auto dd = static_cast<Eigen::Index>(dim_);
    for (Eigen::Index a = 0; a < dd; ++a) {
        const double da = d[a];
        o_s3[a] = other.s3_[a] + 3 * da * other.p2_(a, a) + 3 * da * da * other.s1_[a] +
                  nb * da * da * da;
        o_s4[a] = other.s4_[a] + 4 * da * other.s3_[a] + 6 * da * da * other.p2_(a, a) +
                  4 * da * da * da * other.s1_[a] + nb * da * da * da * da;
        for (Eigen::Index b = 0; b < dd; ++b) {
            const double db = d[b];
            o_p2(a, b) = other.p2_(a, b) + da * other.s1_[b] + db * other.s1_[a] +
                         nb * da * db;
            o_r21(a, b) = other.r21_(a, b) + db * other.p2_(a, a) +
                          2 * da * other.p2_(a, b) + 2 * da * db * other.s1_[a] +
                          da * da * other.s1_[b] + nb * da * da * db;
            o_q22(a, b) = other.q22_(a, b) + 2 * db * other.r21_(a, b) +
                          db * db * other.p2_(a, a) + 2 * da * other.r21_(b, a) +
                          4 * da * db * other.p2_(a, b) + 2 * da * db * db * other.s1_[a] +
                          da * da * other.p2_(b, b) + 2 * da * da * db * other.s1_[b] +
                          nb * da * da * db * db;
        }
    }
    s1_ += o_s1;
    s3_ += o_s3;
    s4_ += o_s4;
    p2_ += o_p2;
    r21_ += o_r21;
    q22_ += o_q22;

    const Eigen::VectorXd gap = other.mean_ - mean_;
    m2_ += other.m2_ + (na * nb / n) * gap * gap.transpose();
    mean_ += (nb / n) * gap;
    n_ = static_cast<long>(n);
}

double MomentAccumulator::mean(std::size_t a) const {
    require_coord(a);
    if (n_ == 0) throw std::logic_error("no samples");
    return mean_[static_cast<Eigen::Index>(a)];
}

double MomentAccumulator::mean_se(std::size_t a) const {
    if (n_ < 2) throw std::logic_error("need >= 2 samples");
    return std::sqrt(variance(a) / static_cast<double>(n_));
}

double MomentAccumulator::covariance(std::size_t a, std::size_t b) const {
    require_coord(a);
    require_coord(b);
    if (n_ < 2) throw std::logic_error("need >= 2 samples");
    return m2_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) /
           static_cast<double>(n_ - 1);
}

double MomentAccumulator::correlation(std::size_t a, std::size_t b) const {
    const double va = variance(a);
    const double vb = variance(b);
    if (!(va > 0.0) || !(vb > 0.0)) return 0.0;
    return covariance(a, b) / std::sqrt(va * vb);
}

double MomentAccumulator::central2(std::size_t a, std::size_t b) const {
    const auto ia = static_cast<Eigen::Index>(a);
    const auto ib = static_cast<Eigen::Index>(b);
    const double n = static_cast<double>(n_);
    const double A = s1_[ia] / n;
    const double B = s1_[ib] / n;
    return p2_(ia, ib) - n * A * B;
}

double MomentAccumulator::central22(std::size_t a, std::size_t b) const {
    const auto ia = static_cast<Eigen::Index>(a);
    const auto ib = static_cast<Eigen::Index>(b);
    const double n = static_cast<double>(n_);
    const double A = s1_[ia] / n;
    const double B = s1_[ib] / n;
    return q22_(ia, ib) - 2 * B * r21_(ia, ib) + B * B * p2_(ia, ia) -
           2 * A * r21_(ib, ia) + 4 * A * B * p2_(ia, ib) - 2 * A * B * B * s1_[ia] +
           A * A * p2_(ib, ib) - 2 * A * A * B * s1_[ib] + n * A * A * B * B;
}

double MomentAccumulator::skewness(std::size_t a) const {
    require_coord(a);
    if (n_ < 2) throw std::logic_error("need >= 2 samples");
    const auto ia = static_cast<Eigen::Index>(a);
    const double n = static_cast<double>(n_);
    const double A = s1_[ia] / n;
    const double m2 = central2(a, a) / n;
    const double m3 =
        (s3_[ia] - 3 * A * p2_(ia, ia) + 2 * n * A * A * A) / n;
    if (!(m2 > 0.0)) return 0.0;
    return m3 / std::pow(m2, 1.5);
}

double MomentAccumulator::kurtosis(std::size_t a) const {
    require_coord(a);
    if (n_ < 2) throw std::logic_error("need >= 2 samples");
    const auto ia = static_cast<Eigen::Index>(a);
    const double n = static_cast<double>(n_);
    const double A = s1_[ia] / n;
    const double m2 = central2(a, a) / n;
    const double m4 = (s4_[ia] - 4 * A * s3_[ia] + 6 * A * A * p2_(ia, ia) -
                       3 * n * A * A * A * A) /
                      n;
    if (!(m2 > 0.0)) return 0.0;
    return m4 / (m2 * m2);
}

double MomentAccumulator::covariance_se(std::size_t a, std::size_t b) const {
    require_coord(a);
    require_coord(b);
    if (n_ < 2) throw std::logic_error("need >= 2 samples");
    const double n = static_cast<double>(n_);
    const double q = central22(a, b) / n;
    const double c = central2(a, b) / n;
    return std::sqrt(std::max(0.0, q - c * c) / n);
}

Eigen::MatrixXd MomentAccumulator::covariance_matrix() const {
    const auto d = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b)
            out(a, b) =
                covariance(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    return out;
}

CovarianceComparison compare_covariance(const MomentAccumulator& acc,
                                        const Eigen::MatrixXd& reference,
                                        double threshold) {
    const auto d = static_cast<Eigen::Index>(acc.dimension());
    if (reference.rows() != d || reference.cols() != d)
        throw std::invalid_argument("reference matrix dimension mismatch");
    if (acc.count() < 100) throw std::invalid_argument("need >= 100 replications");

    CovarianceComparison cmp;
    cmp.z = Eigen::MatrixXd::Zero(d, d);
    bool singular = false;
    for (Eigen::Index a = 0; a < d; ++a) {
        if (!(acc.variance(static_cast<std::size_t>(a)) > 0.0)) singular = true;
        for (Eigen::Index b = 0; b < d; ++b) {
            const double c = acc.covariance(static_cast<std::size_t>(a),
                                            static_cast<std::size_t>(b));
            const double se = acc.covariance_se(static_cast<std::size_t>(a),
                                                static_cast<std::size_t>(b));
            const double diff = c - reference(a, b);
            double z = 0.0;
            if (se > 0.0)
                z = diff / se;
            else if (diff != 0.0)
                z = std::numeric_limits<double>::infinity();
            cmp.z(a, b) = z;
            cmp.max_abs_z = std::max(cmp.max_abs_z, std::abs(z));
        }
    }
    if (singular) cmp.notes.push_back("singular empirical covariance");
    cmp.pass = cmp.max_abs_z < threshold;
    return cmp;
}

}  // namespace dynerg
