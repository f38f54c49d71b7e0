#include "doctest.h"

#include <cmath>
#include <vector>

#include "linksim/nn/adam.hpp"
#include "linksim/nn/layers.hpp"
#include "linksim/nn/tensor.hpp"
#include "linksim/rng.hpp"

using namespace linksim;
using nn::Tensor3;

namespace {

using T3 = Tensor3<double>;

T3 random_tensor(int b, int c, int l, Rng& rng, double scale = 1.0) {
    T3 t(b, c, l);
    for (auto& v : t.data) v = scale * rng.normal();
    return t;
}

double proj_loss(const T3& y, const T3& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.data.size(); ++i) s += y.data[i] * r.data[i];
    return s;
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

// FD check of dL/dx and every dL/dparam for a layer whose forward is
// forward(x). eps = 1e-4 per the substrate contract.
template <typename Fwd>
void fd_check(Fwd&& forward, T3& x, std::vector<nn::ParamView<double>> params, const T3& r,
              const T3& analytic_gx, double tol = 1e-4) {
    const double eps = 1e-4;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double keep = x.data[i];
        x.data[i] = keep + eps;
        const double lp = proj_loss(forward(x), r);
        x.data[i] = keep - eps;
        const double lm = proj_loss(forward(x), r);
        x.data[i] = keep;
        const double fd = (lp - lm) / (2 * eps);
        CAPTURE(i);
        CHECK(rel_err(analytic_gx.data[i], fd) < tol);
    }
    for (auto& p : params) {
        for (std::size_t i = 0; i < p.n; ++i) {
            const double keep = p.value[i];
            p.value[i] = keep + eps;
            const double lp = proj_loss(forward(x), r);
            p.value[i] = keep - eps;
            const double lm = proj_loss(forward(x), r);
            p.value[i] = keep;
            const double fd = (lp - lm) / (2 * eps);
            CHECK(rel_err(p.grad[i], fd) < tol);
        }
    }
}

} // namespace

TEST_CASE("tensor layout: length contiguous, channel-major rows") {
    T3 t(2, 3, 4);
    for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = static_cast<double>(i);
    CHECK(t.at(0, 0, 0) == 0.0);
    CHECK(t.at(0, 0, 3) == 3.0);
    CHECK(t.at(0, 1, 0) == 4.0);
    CHECK(t.at(1, 0, 0) == 12.0);
    CHECK(t.row(1, 2)[3] == 23.0);
}

TEST_CASE("conv1d identity and hand-computed kernels") {
    nn::Conv1d<double> id(1, 1, 3);
    id.weights() = {0.0, 1.0, 0.0};
    T3 x(1, 1, 5);
    x.data = {1, -2, 3, 0.5, 4};
    const T3 y = id.forward(x);
    for (std::size_t i = 0; i < x.data.size(); ++i) CHECK(y.data[i] == x.data[i]);

    nn::Conv1d<double> box(1, 1, 3);
    box.weights() = {1.0, 1.0, 1.0};
    T3 x2(1, 1, 3);
    x2.data = {1, 2, 3};
    const T3 y2 = box.forward(x2);
    CHECK(y2.data[0] == doctest::Approx(3.0));
    CHECK(y2.data[1] == doctest::Approx(6.0));
    CHECK(y2.data[2] == doctest::Approx(5.0));

    CHECK_THROWS_AS(nn::Conv1d<double>(1, 1, 4), Error); // even kernel
}

TEST_CASE("conv1d gradients match finite differences") {
    Rng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const int b = 1 + static_cast<int>(rng.bounded(3));
        const int ci = 1 + static_cast<int>(rng.bounded(3));
        const int co = 1 + static_cast<int>(rng.bounded(3));
        const int k = 2 * static_cast<int>(rng.bounded(3)) + 1;
        const int l = 5 + static_cast<int>(rng.bounded(6));
        nn::Conv1d<double> conv(ci, co, k);
        conv.init_gaussian(rng, 0.5);
        for (auto& v : conv.bias()) v = rng.normal() * 0.1;

        T3 x = random_tensor(b, ci, l, rng);
        const T3 y = conv.forward(x);
        const T3 r = random_tensor(b, co, l, rng);
        const T3 gx = conv.backward(r);
        fd_check([&](T3& in) { return conv.forward(in); }, x, conv.params(), r, gx);
    }
}

TEST_CASE("conv and deconv with zero bias are linear adjoint pairs") {
    Rng rng(103);
    nn::Conv1d<double> conv(3, 2, 5);
    conv.init_gaussian(rng, 1.0);
    T3 x = random_tensor(2, 3, 9, rng);
    T3 g = random_tensor(2, 2, 9, rng);
    const T3 y = conv.forward(x);
    const T3 gx = conv.backward(g);
    CHECK(rel_err(proj_loss(y, g), proj_loss(x, gx)) < 1e-12);

    nn::TransposedConv1d<double> up(3, 2, 4);
    up.init_gaussian(rng, 1.0);
    T3 xu = random_tensor(2, 3, 6, rng);
    T3 gu = random_tensor(2, 2, 24, rng);
    const T3 yu = up.forward(xu);
    const T3 gxu = up.backward(gu);
    CHECK(rel_err(proj_loss(yu, gu), proj_loss(xu, gxu)) < 1e-12);
}

TEST_CASE("transposed conv: hand example and degenerate stride") {
    nn::TransposedConv1d<double> up(1, 1, 2);
    up.weights() = {1.0, 1.0};
    T3 x(1, 1, 2);
    x.data = {1, 2};
    const T3 y = up.forward(x);
    REQUIRE(y.length == 4);
    CHECK(y.data[0] == doctest::Approx(1.0));
    CHECK(y.data[1] == doctest::Approx(1.0));
    CHECK(y.data[2] == doctest::Approx(2.0));
    CHECK(y.data[3] == doctest::Approx(2.0));

    // k = 1: ordinary 1x1 mixing, length preserved
    Rng rng(105);
    nn::TransposedConv1d<double> mix(3, 2, 1);
    mix.init_gaussian(rng, 1.0);
    nn::Conv1d<double> mix1(3, 2, 1);
    mix1.weights() = mix.weights();
    mix1.bias() = mix.bias();
    T3 x2 = random_tensor(2, 3, 7, rng);
    const T3 a = mix.forward(x2), b = mix1.forward(x2);
    REQUIRE(a.length == b.length);
    for (std::size_t i = 0; i < a.data.size(); ++i)
        CHECK(a.data[i] == doctest::Approx(b.data[i]).epsilon(1e-12));
}

TEST_CASE("transposed conv gradients match finite differences") {
    Rng rng(107);
    for (int trial = 0; trial < 20; ++trial) {
        const int b = 1 + static_cast<int>(rng.bounded(3));
        const int ci = 1 + static_cast<int>(rng.bounded(3));
        const int co = 1 + static_cast<int>(rng.bounded(3));
        const int stride = 1 + static_cast<int>(rng.bounded(4));
        const int l = 4 + static_cast<int>(rng.bounded(5));
        nn::TransposedConv1d<double> up(ci, co, stride);
        up.init_gaussian(rng, 0.5);
        for (auto& v : up.bias()) v = rng.normal() * 0.1;

        T3 x = random_tensor(b, ci, l, rng);
        const T3 y = up.forward(x);
        const T3 r = random_tensor(b, co, l * stride, rng);
        const T3 gx = up.backward(r);
        fd_check([&](T3& in) { return up.forward(in); }, x, up.params(), r, gx);
    }
}

TEST_CASE("batchnorm normalizes and the affine parameters shift it") {
    Rng rng(109);
    nn::BatchNorm1d<double> bn(3);
    T3 x = random_tensor(8, 3, 16, rng, 2.5);
    for (auto& v : x.data) v += 1.7;
    const T3 y = bn.forward(x, nn::Mode::Train);

    for (int c = 0; c < 3; ++c) {
        double m = 0.0, ss = 0.0;
        const double n = 8 * 16;
        for (int b = 0; b < 8; ++b)
            for (int l = 0; l < 16; ++l) m += y.at(b, c, l);
        m /= n;
        for (int b = 0; b < 8; ++b)
            for (int l = 0; l < 16; ++l) ss += (y.at(b, c, l) - m) * (y.at(b, c, l) - m);
        ss /= n;
        CHECK(std::abs(m) < 1e-6);
        CHECK(std::abs(ss - 1.0) < 1e-4);
    }

    nn::BatchNorm1d<double> bn2(3);
    for (int c = 0; c < 3; ++c) {
        bn2.gamma()[c] = 2.0;
        bn2.beta()[c] = 3.0;
    }
    const T3 y2 = bn2.forward(x, nn::Mode::Train);
    for (int c = 0; c < 3; ++c) {
        double m = 0.0, ss = 0.0;
        const double n = 8 * 16;
        for (int b = 0; b < 8; ++b)
            for (int l = 0; l < 16; ++l) m += y2.at(b, c, l);
        m /= n;
        for (int b = 0; b < 8; ++b)
            for (int l = 0; l < 16; ++l) ss += (y2.at(b, c, l) - m) * (y2.at(b, c, l) - m);
        ss /= n;
        CHECK(m == doctest::Approx(3.0).epsilon(1e-3));
        CHECK(ss == doctest::Approx(4.0).epsilon(1e-3));
    }
}

TEST_CASE("batchnorm gradients match finite differences") {
    Rng rng(111);
    for (int trial = 0; trial < 20; ++trial) {
        const int b = 2 + static_cast<int>(rng.bounded(3));
        const int c = 1 + static_cast<int>(rng.bounded(3));
        const int l = 4 + static_cast<int>(rng.bounded(5));
        nn::BatchNorm1d<double> bn(c);
        for (int i = 0; i < c; ++i) {
            bn.gamma()[i] = 1.0 + 0.3 * rng.normal();
            bn.beta()[i] = 0.3 * rng.normal();
        }
        T3 x = random_tensor(b, c, l, rng);
        const T3 y = bn.forward(x, nn::Mode::Train);
        const T3 r = random_tensor(b, c, l, rng);
        const T3 gx = bn.backward(r);
        fd_check([&](T3& in) { return bn.forward(in, nn::Mode::Train); }, x, bn.params(), r, gx,
                 2e-4);
    }
}

TEST_CASE("batchnorm inference uses running statistics and is guarded") {
    Rng rng(113);
    nn::BatchNorm1d<double> bn(2);
    T3 x = random_tensor(4, 2, 8, rng);
    CHECK_THROWS_AS(bn.forward(x, nn::Mode::Infer), Error); // no stats yet

    nn::BatchNorm1d<double> fresh(2);
    fresh.mark_statistics_loaded();
    const T3 y0 = fresh.forward(x, nn::Mode::Infer); // identity stats: mean 0 var 1
    for (std::size_t i = 0; i < x.data.size(); ++i)
        CHECK(y0.data[i] == doctest::Approx(x.data[i]).epsilon(1e-4));
}

TEST_CASE("batchnorm train and infer outputs agree once statistics settle") {
    Rng rng(113);
    nn::BatchNorm1d<double> bn(2);
    bn.gamma()[0] = 1.4;
    bn.beta()[1] = -0.6;
    // stationary stream: mean 0.8, stddev 1.9. The train/infer gap shrinks
    // as 1/sqrt(batch elements), so the batches are deliberately large.
    auto draw = [&rng] {
        T3 x = random_tensor(128, 2, 1024, rng, 1.9);
        for (auto& v : x.data) v += 0.8;
        return x;
    };
    for (int i = 0; i < 150; ++i) bn.forward(draw(), nn::Mode::Train);

    T3 probe = draw();
    const T3 yt = bn.forward(probe, nn::Mode::Train);
    const T3 yi = bn.forward(probe, nn::Mode::Infer);
    double se = 0.0;
    for (std::size_t i = 0; i < yt.data.size(); ++i) {
        const double d = yt.data[i] - yi.data[i];
        se += d * d;
    }
    CHECK(std::sqrt(se / static_cast<double>(yt.data.size())) < 1e-2);
}

TEST_CASE("relu and sigmoid pointwise contracts") {
    nn::Relu<double> relu;
    T3 x(1, 1, 3);
    x.data = {-1.0, 0.0, 2.0};
    const T3 y = relu.forward(x);
    CHECK(y.data[0] == 0.0);
    CHECK(y.data[1] == 0.0);
    CHECK(y.data[2] == 2.0);

    CHECK(nn::stable_sigmoid(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    for (double z = -30.0; z <= 30.0; z += 0.5)
        CHECK(nn::stable_sigmoid(-z) ==
              doctest::Approx(1.0 - nn::stable_sigmoid(z)).epsilon(1e-12));
    CHECK(nn::stable_sigmoid(500.0) > 0.0);
    CHECK(nn::stable_sigmoid(500.0) <= 1.0);
    CHECK(nn::stable_sigmoid(-500.0) > 0.0);
    CHECK(std::isfinite(nn::stable_sigmoid(-500.0)));
}

TEST_CASE("relu and sigmoid gradients match finite differences") {
    Rng rng(115);
    for (int trial = 0; trial < 20; ++trial) {
        const int b = 1 + static_cast<int>(rng.bounded(3));
        const int c = 1 + static_cast<int>(rng.bounded(3));
        const int l = 4 + static_cast<int>(rng.bounded(6));

        nn::Relu<double> relu;
        T3 x(b, c, l);
        for (auto& v : x.data) {
            do {
                v = rng.normal();
            } while (std::abs(v) < 0.05); // keep FD away from the kink
        }
        const T3 y = relu.forward(x);
        const T3 r = random_tensor(b, c, l, rng);
        const T3 gx = relu.backward(r);
        fd_check([&](T3& in) { return relu.forward(in); }, x, {}, r, gx);

        nn::Sigmoid<double> sig;
        T3 xs = random_tensor(b, c, l, rng);
        const T3 ys = sig.forward(xs);
        const T3 gs = sig.backward(r);
        fd_check([&](T3& in) { return sig.forward(in); }, xs, {}, r, gs);
    }
}

TEST_CASE("bce loss values") {
    T3 y(1, 1, 1), t(1, 1, 1);
    y.data = {1.0 - 1e-7};
    t.data = {1.0};
    CHECK(nn::bce_loss(y, t) < 1e-6);

    y.data = {0.5};
    CHECK(nn::bce_loss(y, t) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    T3 bad(1, 1, 1);
    bad.data = {0.5};
    T3 lbl(1, 1, 1);
    lbl.data = {0.25};
    CHECK_THROWS_AS(nn::bce_loss(bad, lbl), Error);
}

TEST_CASE("fused logits bce: gradient identity and fd") {
    Rng rng(117);
    T3 z = random_tensor(3, 1, 7, rng, 2.0);
    T3 t(3, 1, 7);
    for (auto& v : t.data) v = rng.bit() ? 1.0 : 0.0;

    T3 grad;
    const double loss = nn::bce_with_logits(z, t, grad);
    const double n = static_cast<double>(z.data.size());

    // analytic identity (sigmoid(z) - y) / n
    for (std::size_t i = 0; i < z.data.size(); ++i)
        CHECK(grad.data[i] ==
              doctest::Approx((nn::stable_sigmoid(z.data[i]) - t.data[i]) / n).epsilon(1e-12));

    // value matches the probability-domain loss
    nn::Sigmoid<double> sig;
    CHECK(loss == doctest::Approx(nn::bce_loss(sig.forward(z), t)).epsilon(1e-9));

    // FD on the value
    const double eps = 1e-4;
    for (std::size_t i = 0; i < z.data.size(); ++i) {
        T3 g2;
        const double keep = z.data[i];
        z.data[i] = keep + eps;
        const double lp = nn::bce_with_logits(z, t, g2);
        z.data[i] = keep - eps;
        const double lm = nn::bce_with_logits(z, t, g2);
        z.data[i] = keep;
        CHECK(rel_err(grad.data[i], (lp - lm) / (2 * eps)) < 1e-4);
    }
}

TEST_CASE("mse loss and gradient") {
    Rng rng(119);
    T3 p = random_tensor(2, 1, 5, rng);
    T3 t = random_tensor(2, 1, 5, rng);
    T3 grad;
    const double loss = nn::mse_loss(p, t, grad);

    double want = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i)
        want += (p.data[i] - t.data[i]) * (p.data[i] - t.data[i]);
    want /= static_cast<double>(p.data.size());
    CHECK(loss == doctest::Approx(want).epsilon(1e-12));

    const double eps = 1e-4;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        T3 g2;
        const double keep = p.data[i];
        p.data[i] = keep + eps;
        const double lp = nn::mse_loss(p, t, g2);
        p.data[i] = keep - eps;
        const double lm = nn::mse_loss(p, t, g2);
        p.data[i] = keep;
        CHECK(rel_err(grad.data[i], (lp - lm) / (2 * eps)) < 1e-4);
    }
}

TEST_CASE("adam: first step, zero grad, quadratic convergence") {
    std::vector<double> w = {0.0, 5.0};
    std::vector<double> g = {1.0, 1.0};
    nn::Adam<double> opt({{w.data(), g.data(), 2}}, 0.1);
    opt.step();
    CHECK(w[0] == doctest::Approx(-0.1).epsilon(1e-6));
    CHECK(w[1] == doctest::Approx(4.9).epsilon(1e-6));

    std::vector<double> w2 = {1.25};
    std::vector<double> g2 = {0.0};
    nn::Adam<double> opt2({{w2.data(), g2.data(), 1}}, 0.1);
    opt2.step();
    CHECK(w2[0] == 1.25); // zero gradient moves nothing

    // minimize w^2
    std::vector<double> w3 = {1.0};
    std::vector<double> g3 = {0.0};
    nn::Adam<double> opt3({{w3.data(), g3.data(), 1}}, 0.05);
    for (int i = 0; i < 500; ++i) {
        g3[0] = 2.0 * w3[0];
        opt3.step();
    }
    CHECK(std::abs(w3[0]) < 1e-2);
}

TEST_CASE("same seed produces identical initializations") {
    nn::Conv1d<float> a(2, 4, 5), b(2, 4, 5);
    Rng ra(321), rb(321);
    a.init_gaussian(ra, 0.05);
    b.init_gaussian(rb, 0.05);
    CHECK(a.weights() == b.weights());
}
