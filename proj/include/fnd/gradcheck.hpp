#ifndef FND_GRADCHECK_HPP
#define FND_GRADCHECK_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fnd/layers.hpp"
#include "fnd/tensor.hpp"

namespace fnd {

// Central finite differences at float64 against analytic gradients already
// stored in the grad tensors. relative error = |a-n| / max(|a|,|n|,1e-8).
inline double max_rel_error(const std::function<double()>& loss_fn,
                            const std::vector<ParamRef<double>>& params, double eps = 1e-5,
                            std::string* worst = nullptr) {
    double max_err = 0.0;
    for (const auto& p : params) {
        Tensor<double>& w = *p.value;
        const Tensor<double>& g = *p.grad;
        for (std::size_t i = 0; i < w.numel(); ++i) {
            const double keep = w[i];
            w[i] = keep + eps;
            const double lp = loss_fn();
            w[i] = keep - eps;
            const double lm = loss_fn();
            w[i] = keep;
            const double numeric = (lp - lm) / (2.0 * eps);
            const double analytic = g[i];
            const double err = std::abs(analytic - numeric) /
                               std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            if (err > max_err) {
                max_err = err;
                if (worst)
                    *worst = p.name + "[" + std::to_string(i) + "] analytic=" +
                             std::to_string(analytic) + " numeric=" + std::to_string(numeric);
            }
        }
    }
    return max_err;
}

// Checks one layer: loss = sum(forward(x) * r) with a fixed random
// projection r, gradients for every parameter and (optionally) the input.
inline double check_layer(Layer<double>& layer, Tensor<double> x, Rng& rng,
                          bool check_input = true, double eps = 1e-5,
                          std::string* worst = nullptr) {
    Ctx<double> ctx{Mode::eval, nullptr};
    Tensor<double> y0 = layer.forward(x, ctx);
    Tensor<double> r = Tensor<double>::uniform(y0.shape(), -1.0, 1.0, rng);

    auto loss_at = [&]() {
        Tensor<double> y = layer.forward(x, ctx);
        double s = 0.0;
        for (std::size_t i = 0; i < y.numel(); ++i) s += y[i] * r[i];
        return s;
    };

    // analytic pass
    layer.forward(x, ctx);
    Tensor<double> dx = layer.backward(r);

    std::vector<ParamRef<double>> params;
    layer.collect_params(params);
    if (check_input && dx.numel() > 0) params.push_back({&x, &dx, layer.name() + ".input"});

    return max_rel_error(loss_at, params, eps, worst);
}

// Checks a whole model through its real loss.
double check_model(Model<double>& model, Tensor<double> x, const std::vector<int>& y,
                   double eps = 1e-5, std::string* worst = nullptr);

struct GradCheckLine {
    std::string target;
    double max_err = 0.0;
    bool pass = false;
};

struct GradCheckReport {
    std::vector<GradCheckLine> lines;
    double tolerance = 1e-4;
    bool all_pass() const {
        for (const auto& l : lines)
            if (!l.pass) return false;
        return !lines.empty();
    }
};

// The full verification suite behind the `gradcheck` CLI subcommand and the
// acceptance tests: every layer kind, both losses, and the CBOW / PV-DM
// negative-sampling objectives, each over `shapes` randomized
// configurations.
GradCheckReport run_gradcheck_suite(std::size_t shapes = 20, std::uint64_t seed = 20240901,
                                    double tolerance = 1e-4);

} // namespace fnd

#endif
