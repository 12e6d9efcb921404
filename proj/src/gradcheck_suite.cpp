#include "fnd/gradcheck.hpp"

#include "fnd/embeddings.hpp"
#include "fnd/losses.hpp"

namespace fnd {

double check_model(Model<double>& model, Tensor<double> x, const std::vector<int>& y,
                   double eps, std::string* worst) {
    Ctx<double> ctx{Mode::eval, nullptr};
    auto loss_at = [&]() {
        Tensor<double> out = model.forward(x, ctx);
        return model.loss == LossKind::bce ? bce_loss<double>(out, y, nullptr)
                                           : softmax_ce_loss<double>(out, y, nullptr);
    };
    Tensor<double> out = model.forward(x, ctx);
    Tensor<double> dout;
    if (model.loss == LossKind::bce)
        bce_loss<double>(out, y, &dout);
    else
        softmax_ce_loss<double>(out, y, &dout);
    model.backward(dout);
    return max_rel_error(loss_at, model.params(), eps, worst);
}

namespace {

double check_bce(Rng& rng) {
    const std::size_t batch = 1 + rng.below(6);
    Tensor<double> yhat({batch, 1});
    std::vector<int> y(batch);
    for (std::size_t b = 0; b < batch; ++b) {
        yhat[b] = rng.uniform(0.05, 0.95); // interior of the clamp range
        y[b] = rng.below(2) ? 1 : 0;
    }
    Tensor<double> dyhat;
    bce_loss<double>(yhat, y, &dyhat);
    auto loss_at = [&]() { return bce_loss<double>(yhat, y, nullptr); };
    return max_rel_error(loss_at, {{&yhat, &dyhat, "bce.p"}});
}

double check_softmax_ce(Rng& rng) {
    const std::size_t batch = 1 + rng.below(6);
    const std::size_t classes = 2 + rng.below(3);
    Tensor<double> logits = Tensor<double>::uniform({batch, classes}, -3.0, 3.0, rng);
    std::vector<int> y(batch);
    for (auto& v : y) v = static_cast<int>(rng.below(classes));
    Tensor<double> dlogits;
    softmax_ce_loss<double>(logits, y, &dlogits);
    auto loss_at = [&]() { return softmax_ce_loss<double>(logits, y, nullptr); };
    return max_rel_error(loss_at, {{&logits, &dlogits, "softmax_ce.logits"}});
}

// CBOW / PV-DM negative-sampling objective: h is the mean of the context
// rows (plus the doc vector for PV-DM); every h contributor receives
// dh / n_parts.
double check_ns_objective(Rng& rng, bool with_doc_vec) {
    const std::size_t dim = 2 + rng.below(6);
    const std::size_t n_ctx = with_doc_vec ? rng.below(4) : 1 + rng.below(4);
    const std::size_t n_neg = 1 + rng.below(4);
    const std::size_t n_parts = n_ctx + (with_doc_vec ? 1 : 0);

    Tensor<double> parts = Tensor<double>::uniform({n_parts, dim}, -1.0, 1.0, rng);
    Tensor<double> pos = Tensor<double>::uniform({dim}, -1.0, 1.0, rng);
    Tensor<double> negs = Tensor<double>::uniform({n_neg, dim}, -1.0, 1.0, rng);

    std::vector<double> h(dim);
    auto fuse = [&]() {
        for (std::size_t i = 0; i < dim; ++i) {
            double s = 0.0;
            for (std::size_t p = 0; p < n_parts; ++p) s += parts.at(p, i);
            h[i] = s / static_cast<double>(n_parts);
        }
    };
    auto loss_at = [&]() {
        fuse();
        std::vector<const double*> neg_rows;
        for (std::size_t n = 0; n < n_neg; ++n) neg_rows.push_back(negs.data() + n * dim);
        return detail::ns_objective<double>(h.data(), dim, pos.data(), neg_rows, nullptr,
                                            nullptr, nullptr);
    };

    // analytic gradients
    fuse();
    std::vector<double> dh(dim, 0.0);
    Tensor<double> dpos({dim});
    Tensor<double> dnegs({n_neg, dim});
    std::vector<const double*> neg_rows;
    std::vector<double*> dneg_rows;
    for (std::size_t n = 0; n < n_neg; ++n) {
        neg_rows.push_back(negs.data() + n * dim);
        dneg_rows.push_back(dnegs.data() + n * dim);
    }
    detail::ns_objective<double>(h.data(), dim, pos.data(), neg_rows, dh.data(), dpos.data(),
                                 &dneg_rows);
    Tensor<double> dparts({n_parts, dim});
    for (std::size_t p = 0; p < n_parts; ++p)
        for (std::size_t i = 0; i < dim; ++i)
            dparts.at(p, i) = dh[i] / static_cast<double>(n_parts);

    return max_rel_error(loss_at, {{&parts, &dparts, "ns.parts"},
                                   {&pos, &dpos, "ns.pos"},
                                   {&negs, &dnegs, "ns.negs"}});
}

} // namespace

GradCheckReport run_gradcheck_suite(std::size_t shapes, std::uint64_t seed, double tolerance) {
    GradCheckReport report;
    report.tolerance = tolerance;
    Rng rng(seed);

    auto record = [&](const std::string& target, double err) {
        report.lines.push_back({target, err, err < tolerance});
    };

    {
        double worst = 0.0;
        for (std::size_t s = 0; s < shapes; ++s) {
            const std::size_t b = 1 + rng.below(4), din = 1 + rng.below(8),
                              dout = 1 + rng.below(8);
            Dense<double> layer(din, dout, rng);
            Tensor<double> x = Tensor<double>::uniform({b, din}, -2.0, 2.0, rng);
            worst = std::max(worst, check_layer(layer, std::move(x), rng));
        }
        record("dense", worst);
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < shapes; ++s) {
            const std::size_t k = 2 + rng.below(4), cin = 1 + rng.below(4),
                              cout = 1 + rng.below(4);
            const std::size_t b = 1 + rng.below(3), len = k + rng.below(6);
            Conv1D<double> layer(cin, cout, k, rng);
            Tensor<double> x = Tensor<double>::uniform({b, len, cin}, -2.0, 2.0, rng);
            worst = std::max(worst, check_layer(layer, std::move(x), rng));
        }
        record("conv1d", worst);
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < shapes; ++s) {
            const std::size_t b = 1 + rng.below(3), len = 2 + rng.below(6),
                              c = 1 + rng.below(5);
            GlobalMaxPool<double> layer;
            // continuous random values: tied maxima have probability zero
            Tensor<double> x = Tensor<double>::uniform({b, len, c}, -2.0, 2.0, rng);
            worst = std::max(worst, check_layer(layer, std::move(x), rng));
        }
        record("global_max_pool", worst);
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < shapes; ++s) {
            Dropout<double> layer(0.5); // eval mode: identity
            const std::size_t b = 1 + rng.below(3), n = 1 + rng.below(8);
            Tensor<double> x = Tensor<double>::uniform({b, n}, -2.0, 2.0, rng);
            worst = std::max(worst, check_layer(layer, std::move(x), rng));
        }
        record("dropout_eval", worst);
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < shapes; ++s) {
            const std::size_t vocab = 3 + rng.below(8), de = 1 + rng.below(6);
            const std::size_t b = 1 + rng.below(3), len = 1 + rng.below(5);
            EmbeddingLookup<double> layer(vocab, de, rng);
            Tensor<double> ids({b, len});
            for (std::size_t i = 0; i < ids.numel(); ++i)
                ids[i] = static_cast<double>(rng.below(vocab));
            worst = std::max(worst, check_layer(layer, std::move(ids), rng, false));
        }
        record("embedding_lookup", worst);
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < shapes; ++s) {
            const std::size_t b = 1 + rng.below(2), len = 1 + rng.below(5),
                              din = 1 + rng.below(4), h = 1 + rng.below(5);
            BiLstm<double> layer(din, h, rng);
            Tensor<double> x = Tensor<double>::uniform({b, len, din}, -1.0, 1.0, rng);
            worst = std::max(worst, check_layer(layer, std::move(x), rng));
        }
        record("bilstm_bptt", worst);
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < shapes; ++s) worst = std::max(worst, check_bce(rng));
        record("bce", worst);
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < shapes; ++s) worst = std::max(worst, check_softmax_ce(rng));
        record("softmax_ce", worst);
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < shapes; ++s)
            worst = std::max(worst, check_ns_objective(rng, false));
        record("cbow_objective", worst);
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < shapes; ++s)
            worst = std::max(worst, check_ns_objective(rng, true));
        record("pvdm_objective", worst);
    }
    return report;
}

} // namespace fnd
