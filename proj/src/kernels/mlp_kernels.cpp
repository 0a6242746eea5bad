#include <cmath>
#include <vector>

#include "blocked.hpp"
#include "lmopt/kernels.hpp"

namespace lmopt::kernels {

namespace {

// h = act(a) together with act'(a) and act''(a).
inline void activate(Activation act, double a, double& h, double& d1, double& d2) {
  if (act == Activation::Tanh) {
    h = std::tanh(a);
    d1 = 1.0 - h * h;
    d2 = -2.0 * h * d1;
  } else {
    h = sigmoid(a);
    d1 = h * (1.0 - h);
    d2 = d1 * (1.0 - 2.0 * h);
  }
}

struct Scratch {
  explicit Scratch(const MlpArchitecture& arch)
      : a1(arch.hidden1), h1(arch.hidden1), g1(arch.hidden1), gg1(arch.hidden1),
        a2(arch.hidden2), h2(arch.hidden2), g2(arch.hidden2), gg2(arch.hidden2),
        da2(arch.hidden2), da1(arch.hidden1),
        ra1(arch.hidden1), rh1(arch.hidden1), ra2(arch.hidden2), rh2(arch.hidden2),
        rda2(arch.hidden2), rda1(arch.hidden1) {}

  std::vector<double> a1, h1, g1, gg1, a2, h2, g2, gg2, da2, da1;
  std::vector<double> ra1, rh1, ra2, rh2, rda2, rda1;
};

// Forward pass; fills the activations in `s` and returns the logit.
double forward(const MlpArchitecture& arch, std::span<const double> x, std::span<const double> u,
               Scratch& s) {
  const std::size_t d = arch.inputs, n1 = arch.hidden1, n2 = arch.hidden2;
  const double* W1 = x.data() + arch.off_w1();
  const double* b1 = x.data() + arch.off_b1();
  const double* W2 = x.data() + arch.off_w2();
  const double* b2 = x.data() + arch.off_b2();
  const double* w3 = x.data() + arch.off_w3();
  const double b3 = x[arch.off_b3()];

  for (std::size_t r = 0; r < n1; ++r) {
    double a = b1[r];
    for (std::size_t c = 0; c < d; ++c) a += W1[r * d + c] * u[c];
    s.a1[r] = a;
    activate(arch.activation, a, s.h1[r], s.g1[r], s.gg1[r]);
  }
  for (std::size_t r = 0; r < n2; ++r) {
    double a = b2[r];
    for (std::size_t c = 0; c < n1; ++c) a += W2[r * n1 + c] * s.h1[c];
    s.a2[r] = a;
    activate(arch.activation, a, s.h2[r], s.g2[r], s.gg2[r]);
  }
  double z = b3;
  for (std::size_t r = 0; r < n2; ++r) z += w3[r] * s.h2[r];
  return z;
}

double sample_grad(const MlpArchitecture& arch, std::span<const double> x,
                   std::span<const double> u, double y, std::span<double> acc, Scratch& s) {
  const std::size_t d = arch.inputs, n1 = arch.hidden1, n2 = arch.hidden2;
  const double* W2 = x.data() + arch.off_w2();
  const double* w3 = x.data() + arch.off_w3();
  double* gW1 = acc.data() + arch.off_w1();
  double* gb1 = acc.data() + arch.off_b1();
  double* gW2 = acc.data() + arch.off_w2();
  double* gb2 = acc.data() + arch.off_b2();
  double* gw3 = acc.data() + arch.off_w3();

  const double z = forward(arch, x, u, s);
  // BCE with logits for target t = (y+1)/2 equals softplus(-y z).
  const double loss = softplus(-y * z);
  const double dz = -y * sigmoid(-y * z);

  for (std::size_t r = 0; r < n2; ++r) gw3[r] += dz * s.h2[r];
  acc[arch.off_b3()] += dz;

  for (std::size_t r = 0; r < n2; ++r) {
    s.da2[r] = dz * w3[r] * s.g2[r];
    for (std::size_t c = 0; c < n1; ++c) gW2[r * n1 + c] += s.da2[r] * s.h1[c];
    gb2[r] += s.da2[r];
  }
  for (std::size_t c = 0; c < n1; ++c) {
    double dh = 0.0;
    for (std::size_t r = 0; r < n2; ++r) dh += W2[r * n1 + c] * s.da2[r];
    s.da1[c] = dh * s.g1[c];
  }
  for (std::size_t r = 0; r < n1; ++r) {
    for (std::size_t c = 0; c < d; ++c) gW1[r * d + c] += s.da1[r] * u[c];
    gb1[r] += s.da1[r];
  }
  return loss;
}

void sample_hvp(const MlpArchitecture& arch, std::span<const double> x, std::span<const double> v,
                std::span<const double> u, double y, std::span<double> acc, Scratch& s) {
  const std::size_t d = arch.inputs, n1 = arch.hidden1, n2 = arch.hidden2;
  const double* W2 = x.data() + arch.off_w2();
  const double* w3 = x.data() + arch.off_w3();
  const double* V1 = v.data() + arch.off_w1();
  const double* c1 = v.data() + arch.off_b1();
  const double* V2 = v.data() + arch.off_w2();
  const double* c2 = v.data() + arch.off_b2();
  const double* v3 = v.data() + arch.off_w3();
  const double c3 = v[arch.off_b3()];
  double* oW1 = acc.data() + arch.off_w1();
  double* ob1 = acc.data() + arch.off_b1();
  double* oW2 = acc.data() + arch.off_w2();
  double* ob2 = acc.data() + arch.off_b2();
  double* ow3 = acc.data() + arch.off_w3();

  const double z = forward(arch, x, u, s);

  // Tangent forward pass: R{.} denotes the directional derivative along v.
  for (std::size_t r = 0; r < n1; ++r) {
    double ra = c1[r];
    for (std::size_t c = 0; c < d; ++c) ra += V1[r * d + c] * u[c];
    s.ra1[r] = ra;
    s.rh1[r] = s.g1[r] * ra;
  }
  for (std::size_t r = 0; r < n2; ++r) {
    double ra = c2[r];
    for (std::size_t c = 0; c < n1; ++c) ra += V2[r * n1 + c] * s.h1[c] + W2[r * n1 + c] * s.rh1[c];
    s.ra2[r] = ra;
    s.rh2[r] = s.g2[r] * ra;
  }
  double rz = c3;
  for (std::size_t r = 0; r < n2; ++r) rz += v3[r] * s.h2[r] + w3[r] * s.rh2[r];

  const double sg = sigmoid(-y * z);
  const double dz = -y * sg;
  const double rdz = sg * (1.0 - sg) * rz;

  for (std::size_t r = 0; r < n2; ++r) ow3[r] += rdz * s.h2[r] + dz * s.rh2[r];
  acc[arch.off_b3()] += rdz;

  for (std::size_t r = 0; r < n2; ++r) {
    const double dh2 = dz * w3[r];
    const double rdh2 = rdz * w3[r] + dz * v3[r];
    s.da2[r] = dh2 * s.g2[r];
    s.rda2[r] = rdh2 * s.g2[r] + dh2 * s.gg2[r] * s.ra2[r];
    for (std::size_t c = 0; c < n1; ++c)
      oW2[r * n1 + c] += s.rda2[r] * s.h1[c] + s.da2[r] * s.rh1[c];
    ob2[r] += s.rda2[r];
  }
  for (std::size_t c = 0; c < n1; ++c) {
    double dh1 = 0.0, rdh1 = 0.0;
    for (std::size_t r = 0; r < n2; ++r) {
      dh1 += W2[r * n1 + c] * s.da2[r];
      rdh1 += V2[r * n1 + c] * s.da2[r] + W2[r * n1 + c] * s.rda2[r];
    }
    s.rda1[c] = rdh1 * s.g1[c] + dh1 * s.gg1[c] * s.ra1[c];
  }
  for (std::size_t r = 0; r < n1; ++r) {
    for (std::size_t c = 0; c < d; ++c) oW1[r * d + c] += s.rda1[r] * u[c];
    ob1[r] += s.rda1[r];
  }
}

double grad_accumulate(const MlpArchitecture& arch, const Dataset& data,
                       std::span<const std::size_t> idx, std::span<const double> x,
                       std::span<double> acc) {
  Scratch s(arch);
  double loss = 0.0;
  for (std::size_t i : idx) loss += sample_grad(arch, x, data.row(i), data.labels[i], acc, s);
  return loss;
}

double hvp_accumulate(const MlpArchitecture& arch, const Dataset& data,
                      std::span<const std::size_t> idx, std::span<const double> x,
                      std::span<const double> v, std::span<double> acc) {
  Scratch s(arch);
  for (std::size_t i : idx) sample_hvp(arch, x, v, data.row(i), data.labels[i], acc, s);
  return 0.0;
}

double loss_accumulate(const MlpArchitecture& arch, const Dataset& data, std::span<const std::size_t> idx,
                       std::span<const double> x) {
  Scratch s(arch);
  double loss = 0.0;
  for (std::size_t i : idx) {
    const double y = data.labels[i];
    loss += softplus(-y * forward(arch, x, data.row(i), s));
  }
  return loss;
}

}  // namespace

namespace serial {

double mlp_value(const MlpArchitecture& arch, const Dataset& data, std::span<const std::size_t> idx,
                 std::span<const double> x) {
  return loss_accumulate(arch, data, idx, x);
}

double mlp_value_grad(const MlpArchitecture& arch, const Dataset& data,
                      std::span<const std::size_t> idx, std::span<const double> x,
                      std::span<double> grad_sum) {
  std::fill(grad_sum.begin(), grad_sum.end(), 0.0);
  return grad_accumulate(arch, data, idx, x, grad_sum);
}

void mlp_hvp(const MlpArchitecture& arch, const Dataset& data, std::span<const std::size_t> idx,
             std::span<const double> x, std::span<const double> v, std::span<double> out_sum) {
  std::fill(out_sum.begin(), out_sum.end(), 0.0);
  hvp_accumulate(arch, data, idx, x, v, out_sum);
}

}  // namespace serial

namespace parallel {

double mlp_value(const MlpArchitecture& arch, const Dataset& data, std::span<const std::size_t> idx,
                 std::span<const double> x) {
  return detail::blocked_reduce(idx, 0, {}, [&](std::span<const std::size_t> slice, std::span<double>) {
    return loss_accumulate(arch, data, slice, x);
  });
}

double mlp_value_grad(const MlpArchitecture& arch, const Dataset& data,
                      std::span<const std::size_t> idx, std::span<const double> x,
                      std::span<double> grad_sum) {
  return detail::blocked_reduce(idx, arch.num_params(), grad_sum,
                                [&](std::span<const std::size_t> slice, std::span<double> acc) {
                                  return grad_accumulate(arch, data, slice, x, acc);
                                });
}

void mlp_hvp(const MlpArchitecture& arch, const Dataset& data, std::span<const std::size_t> idx,
             std::span<const double> x, std::span<const double> v, std::span<double> out_sum) {
  detail::blocked_reduce(idx, arch.num_params(), out_sum,
                         [&](std::span<const std::size_t> slice, std::span<double> acc) {
                           return hvp_accumulate(arch, data, slice, x, v, acc);
                         });
}

}  // namespace parallel

// Single-row forward used by MlpWelsch::logit.
double mlp_logit(const MlpArchitecture& arch, std::span<const double> x, std::span<const double> u) {
  Scratch s(arch);
  return forward(arch, x, u, s);
}

}  // namespace lmopt::kernels
