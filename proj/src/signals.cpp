#include "gsp/signals.hpp"

#include <cmath>

#include "gsp/errors.hpp"
#include "gsp/random.hpp"

namespace gsp {

using Eigen::VectorXd;

VectorXd gen_signal(const GftBasis& basis, const SignalModel& model, std::uint64_t seed) {
  const int n = basis.size();
  if (basis.is_complex) throw InvalidArgument("gen_signal: basis must be real");
  if (model.r < 1 || model.r > n) throw InvalidArgument("gen_signal: need 1 <= r <= N");
  if (!(model.decay > 0.0)) throw InvalidArgument("gen_signal: decay must be positive");
  Rng rng(mix_seed(seed));
  if (model.kind == SignalModel::Kind::exact_bandlimited) {
    const VectorXd c = normal_vector(model.r, rng, model.mean, model.stddev);
    return basis.eigenvectors.leftCols(model.r) * c;
  }
  // Same stream: the first r draws match the exact model.
  VectorXd c = normal_vector(n, rng, model.mean, model.stddev);
  const double lambda_r = std::abs(basis.eigenvalues[model.r - 1]);
  for (int i = 0; i < n; ++i) {
    const double lambda = std::abs(basis.eigenvalues[i]);
    if (lambda > lambda_r) c[i] *= std::exp(-model.decay * (lambda - lambda_r));
  }
  return basis.eigenvectors * c;
}

VectorXd add_noise_snr(const VectorXd& f, double snr_db, std::uint64_t seed) {
  const double nf = f.norm();
  if (nf == 0.0) throw InvalidArgument("add_noise_snr: zero signal");
  if (std::isinf(snr_db) && snr_db > 0.0) return f;
  Rng rng(mix_seed(seed));
  VectorXd noise = normal_vector(f.size(), rng);
  const double target = nf * std::pow(10.0, -snr_db / 20.0);
  noise *= target / noise.norm();
  return f + noise;
}

VectorXd add_noise_iid(const VectorXd& f, double stddev, std::uint64_t seed) {
  if (stddev < 0.0) throw InvalidArgument("add_noise_iid: negative stddev");
  Rng rng(mix_seed(seed));
  return f + normal_vector(f.size(), rng, 0.0, stddev);
}

}  // namespace gsp
