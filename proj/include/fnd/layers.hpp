#ifndef FND_LAYERS_HPP
#define FND_LAYERS_HPP

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "fnd/errors.hpp"
#include "fnd/kernels.hpp"
#include "fnd/rng.hpp"
#include "fnd/tensor.hpp"

namespace fnd {

enum class Mode { train, eval };

template <typename T>
struct Ctx {
    Mode mode = Mode::eval;
    Rng* rng = nullptr; // dropout masks in train mode
};

template <typename T>
struct ParamRef {
    Tensor<T>* value;
    Tensor<T>* grad;
    std::string name;
};

template <typename T>
class Layer {
public:
    virtual ~Layer() = default;
    // forward never mutates x; backward may only follow a forward on the
    // same batch (layers cache what they need)
    virtual Tensor<T> forward(const Tensor<T>& x, Ctx<T>& ctx) = 0;
    virtual Tensor<T> backward(const Tensor<T>& dy) = 0;
    virtual void collect_params(std::vector<ParamRef<T>>& out) { (void)out; }
    virtual std::string name() const = 0;
};

// y = x W + b
template <typename T>
class Dense : public Layer<T> {
public:
    Dense(std::size_t din, std::size_t dout, Rng& rng)
        : din_(din), dout_(dout) {
        const T limit = static_cast<T>(std::sqrt(6.0 / (double(din) + double(dout))));
        w_ = Tensor<T>::uniform({din, dout}, -limit, limit, rng);
        b_ = Tensor<T>::zeros({dout});
        gw_ = Tensor<T>::zeros({din, dout});
        gb_ = Tensor<T>::zeros({dout});
    }

    Tensor<T> forward(const Tensor<T>& x, Ctx<T>&) override {
        if (x.rank() != 2 || x.dim(1) != din_)
            throw config_error("dense: input shape mismatch for layer " + name());
        x_ = x;
        const std::size_t batch = x.dim(0);
        Tensor<T> y({batch, dout_});
        kernels::gemm_nn(x.data(), w_.data(), y.data(), batch, din_, dout_);
        for (std::size_t i = 0; i < batch; ++i) {
            T* row = y.data() + i * dout_;
            for (std::size_t j = 0; j < dout_; ++j) row[j] += b_[j];
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& dy) override {
        const std::size_t batch = x_.dim(0);
        kernels::gemm_tn(x_.data(), dy.data(), gw_.data(), din_, batch, dout_);
        kernels::col_sum(dy.data(), gb_.data(), batch, dout_);
        Tensor<T> dx({batch, din_});
        kernels::gemm_nt(dy.data(), w_.data(), dx.data(), batch, dout_, din_);
        return dx;
    }

    void collect_params(std::vector<ParamRef<T>>& out) override {
        out.push_back({&w_, &gw_, name() + ".w"});
        out.push_back({&b_, &gb_, name() + ".b"});
    }

    std::string name() const override {
        return "dense" + std::to_string(din_) + "x" + std::to_string(dout_);
    }

private:
    std::size_t din_, dout_;
    Tensor<T> w_, b_, gw_, gb_, x_;
};

template <typename T>
class Relu : public Layer<T> {
public:
    Tensor<T> forward(const Tensor<T>& x, Ctx<T>&) override {
        x_ = x;
        Tensor<T> y = x;
        for (std::size_t i = 0; i < y.numel(); ++i)
            if (y[i] < T(0)) y[i] = T(0);
        return y;
    }
    Tensor<T> backward(const Tensor<T>& dy) override {
        Tensor<T> dx = dy;
        for (std::size_t i = 0; i < dx.numel(); ++i)
            if (x_[i] <= T(0)) dx[i] = T(0);
        return dx;
    }
    std::string name() const override { return "relu"; }

private:
    Tensor<T> x_;
};

template <typename T>
class Sigmoid : public Layer<T> {
public:
    Tensor<T> forward(const Tensor<T>& x, Ctx<T>&) override {
        y_ = x;
        for (std::size_t i = 0; i < y_.numel(); ++i)
            y_[i] = T(1) / (T(1) + std::exp(-y_[i]));
        return y_;
    }
    Tensor<T> backward(const Tensor<T>& dy) override {
        Tensor<T> dx = dy;
        for (std::size_t i = 0; i < dx.numel(); ++i) dx[i] *= y_[i] * (T(1) - y_[i]);
        return dx;
    }
    std::string name() const override { return "sigmoid"; }

private:
    Tensor<T> y_;
};

// Cross-correlation over the length axis, valid padding, stride 1.
// x[B,L,Cin] -> y[B,L-K+1,Cout]
template <typename T>
class Conv1D : public Layer<T> {
public:
    Conv1D(std::size_t cin, std::size_t cout, std::size_t ksz, Rng& rng)
        : cin_(cin), cout_(cout), ksz_(ksz) {
        const T limit =
            static_cast<T>(std::sqrt(6.0 / (double(ksz * cin) + double(ksz * cout))));
        w_ = Tensor<T>::uniform({ksz, cin, cout}, -limit, limit, rng);
        b_ = Tensor<T>::zeros({cout});
        gw_ = Tensor<T>::zeros({ksz, cin, cout});
        gb_ = Tensor<T>::zeros({cout});
    }

    Tensor<T> forward(const Tensor<T>& x, Ctx<T>&) override {
        if (x.rank() != 3 || x.dim(2) != cin_)
            throw config_error("conv1d: input shape mismatch for layer " + name());
        if (x.dim(1) < ksz_)
            throw config_error("conv1d: sequence length " + std::to_string(x.dim(1)) +
                               " is shorter than the window " + std::to_string(ksz_) +
                               " in layer " + name());
        x_ = x;
        const std::size_t batch = x.dim(0), len = x.dim(1), lout = len - ksz_ + 1;
        Tensor<T> y({batch, lout, cout_});
        kernels::conv1d_forward(x.data(), w_.data(), b_.data(), y.data(), batch, len, cin_,
                                ksz_, cout_);
        return y;
    }

    Tensor<T> backward(const Tensor<T>& dy) override {
        const std::size_t batch = x_.dim(0), len = x_.dim(1);
        kernels::conv1d_backward_params(x_.data(), dy.data(), gw_.data(), gb_.data(), batch,
                                        len, cin_, ksz_, cout_);
        Tensor<T> dx({batch, len, cin_});
        kernels::conv1d_backward_input(dy.data(), w_.data(), dx.data(), batch, len, cin_, ksz_,
                                       cout_);
        return dx;
    }

    void collect_params(std::vector<ParamRef<T>>& out) override {
        out.push_back({&w_, &gw_, name() + ".w"});
        out.push_back({&b_, &gb_, name() + ".b"});
    }

    std::string name() const override {
        return "conv1d_" + std::to_string(cin_) + "x" + std::to_string(cout_) + "k" +
               std::to_string(ksz_);
    }

private:
    std::size_t cin_, cout_, ksz_;
    Tensor<T> w_, b_, gw_, gb_, x_;
};

// x[B,L,C] -> y[B,C]; gradient flows to the first maximal position.
template <typename T>
class GlobalMaxPool : public Layer<T> {
public:
    Tensor<T> forward(const Tensor<T>& x, Ctx<T>&) override {
        const std::size_t batch = x.dim(0), len = x.dim(1), ch = x.dim(2);
        len_ = len;
        Tensor<T> y({batch, ch});
        argmax_.assign(batch * ch, 0);
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t c = 0; c < ch; ++c) {
                T best = x.at(b, 0, c);
                std::size_t bi = 0;
                for (std::size_t t = 1; t < len; ++t)
                    if (x.at(b, t, c) > best) {
                        best = x.at(b, t, c);
                        bi = t;
                    }
                y.at(b, c) = best;
                argmax_[b * ch + c] = bi;
            }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& dy) override {
        const std::size_t batch = dy.dim(0), ch = dy.dim(1);
        Tensor<T> dx({batch, len_, ch});
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t c = 0; c < ch; ++c)
                dx.at(b, argmax_[b * ch + c], c) = dy.at(b, c);
        return dx;
    }

    std::string name() const override { return "global_max_pool"; }

private:
    std::size_t len_ = 0;
    std::vector<std::size_t> argmax_;
};

// Inverted dropout: survivors are scaled by 1/(1-p) in train mode, eval is
// the identity.
template <typename T>
class Dropout : public Layer<T> {
public:
    explicit Dropout(double p) : p_(p) {
        if (p < 0.0 || p >= 1.0) throw config_error("dropout probability must lie in [0,1)");
    }

    Tensor<T> forward(const Tensor<T>& x, Ctx<T>& ctx) override {
        if (ctx.mode == Mode::eval || p_ == 0.0) {
            train_pass_ = false;
            return x;
        }
        if (!ctx.rng) throw config_error("dropout in train mode needs an rng");
        train_pass_ = true;
        const T scale = static_cast<T>(1.0 / (1.0 - p_));
        mask_ = Tensor<T>(x.shape());
        Tensor<T> y = x;
        for (std::size_t i = 0; i < y.numel(); ++i) {
            const T m = ctx.rng->uniform() < p_ ? T(0) : scale;
            mask_[i] = m;
            y[i] *= m;
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& dy) override {
        if (!train_pass_) return dy;
        Tensor<T> dx = dy;
        for (std::size_t i = 0; i < dx.numel(); ++i) dx[i] *= mask_[i];
        return dx;
    }

    std::string name() const override { return "dropout" + std::to_string(p_); }

private:
    double p_;
    bool train_pass_ = false;
    Tensor<T> mask_;
};

// Trainable lookup for id sequences: x[B,L] of token ids (stored as T)
// -> y[B,L,de]. Row 0 is the padding/OOV row, pinned at zero with zero
// gradient.
template <typename T>
class EmbeddingLookup : public Layer<T> {
public:
    EmbeddingLookup(std::size_t vocab, std::size_t de, Rng& rng) : vocab_(vocab), de_(de) {
        const T limit = static_cast<T>(std::sqrt(6.0 / (double(vocab) + double(de))));
        e_ = Tensor<T>::uniform({vocab, de}, -limit, limit, rng);
        for (std::size_t j = 0; j < de; ++j) e_[j] = T(0); // padding row
        ge_ = Tensor<T>::zeros({vocab, de});
    }

    Tensor<T> forward(const Tensor<T>& x, Ctx<T>&) override {
        const std::size_t batch = x.dim(0), len = x.dim(1);
        ids_.assign(batch * len, 0);
        Tensor<T> y({batch, len, de_});
        for (std::size_t i = 0; i < batch * len; ++i) {
            const std::size_t id = static_cast<std::size_t>(x[i] + T(0.5));
            if (id >= vocab_) throw data_error("embedding_lookup: id out of range");
            ids_[i] = id;
            const T* row = e_.data() + id * de_;
            T* dst = y.data() + i * de_;
            for (std::size_t j = 0; j < de_; ++j) dst[j] = row[j];
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& dy) override {
        ge_.fill(T(0));
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            if (ids_[i] == 0) continue; // padding contributes nothing
            T* grow = ge_.data() + ids_[i] * de_;
            const T* src = dy.data() + i * de_;
            for (std::size_t j = 0; j < de_; ++j) grow[j] += src[j];
        }
        return Tensor<T>(); // ids carry no gradient
    }

    void collect_params(std::vector<ParamRef<T>>& out) override {
        out.push_back({&e_, &ge_, name() + ".e"});
    }

    std::string name() const override {
        return "embedding" + std::to_string(vocab_) + "x" + std::to_string(de_);
    }

private:
    std::size_t vocab_, de_;
    Tensor<T> e_, ge_;
    std::vector<std::size_t> ids_;
};

// Bidirectional LSTM over x[B,L,din]; emits the concatenation of the two
// final hidden states [B,2h]. Standard cell: i,f,o sigmoid gates, g tanh,
// c_t = f*c_{t-1} + i*g, h_t = o*tanh(c_t), zero initial states. Full
// backpropagation through time.
template <typename T>
class BiLstm : public Layer<T> {
public:
    BiLstm(std::size_t din, std::size_t hidden, Rng& rng) : din_(din), h_(hidden) {
        for (int d = 0; d < 2; ++d) {
            dir_[d].wx = Tensor<T>::uniform({din, 4 * h_}, T(-0.08), T(0.08), rng);
            dir_[d].wh = Tensor<T>::uniform({h_, 4 * h_}, T(-0.08), T(0.08), rng);
            dir_[d].b = Tensor<T>::zeros({4 * h_});
            for (std::size_t j = h_; j < 2 * h_; ++j) dir_[d].b[j] = T(1); // forget gate
            dir_[d].gwx = Tensor<T>::zeros({din, 4 * h_});
            dir_[d].gwh = Tensor<T>::zeros({h_, 4 * h_});
            dir_[d].gb = Tensor<T>::zeros({4 * h_});
        }
    }

    Tensor<T> forward(const Tensor<T>& x, Ctx<T>&) override {
        if (x.rank() != 3 || x.dim(2) != din_)
            throw config_error("bilstm: input shape mismatch for layer " + name());
        x_ = x;
        const std::size_t batch = x.dim(0), len = x.dim(1);
        Tensor<T> out({batch, 2 * h_});
        for (int d = 0; d < 2; ++d) {
            run_direction(d, batch, len);
            const auto& hs = dir_[d].hs;
            const T* hlast = hs.data() + len * batch * h_; // state after last step
            for (std::size_t b = 0; b < batch; ++b)
                for (std::size_t j = 0; j < h_; ++j)
                    out.at(b, d * h_ + j) = hlast[b * h_ + j];
        }
        return out;
    }

    Tensor<T> backward(const Tensor<T>& dy) override {
        const std::size_t batch = x_.dim(0), len = x_.dim(1);
        Tensor<T> dx({batch, len, din_});
        for (int d = 0; d < 2; ++d) backward_direction(d, batch, len, dy, dx);
        return dx;
    }

    void collect_params(std::vector<ParamRef<T>>& out) override {
        const char* tag[2] = {".fwd", ".bwd"};
        for (int d = 0; d < 2; ++d) {
            out.push_back({&dir_[d].wx, &dir_[d].gwx, name() + tag[d] + ".wx"});
            out.push_back({&dir_[d].wh, &dir_[d].gwh, name() + tag[d] + ".wh"});
            out.push_back({&dir_[d].b, &dir_[d].gb, name() + tag[d] + ".b"});
        }
    }

    std::string name() const override { return "bilstm" + std::to_string(h_); }

private:
    struct Direction {
        Tensor<T> wx, wh, b, gwx, gwh, gb;
        // caches, indexed by step s in processing order
        std::vector<T> gates; // (len)   x [B,4h], post-activation i,f,g,o
        std::vector<T> cs;    // (len+1) x [B,h], cs[0] = 0
        std::vector<T> hs;    // (len+1) x [B,h], hs[0] = 0
    };

    std::size_t step_index(int d, std::size_t s, std::size_t len) const {
        // forward direction reads x[t=s]; backward direction reads x[len-1-s]
        return d == 0 ? s : len - 1 - s;
    }

    void run_direction(int d, std::size_t batch, std::size_t len) {
        Direction& dir = dir_[d];
        const std::size_t g4 = 4 * h_;
        dir.gates.assign(len * batch * g4, T(0));
        dir.cs.assign((len + 1) * batch * h_, T(0));
        dir.hs.assign((len + 1) * batch * h_, T(0));
        std::vector<T> xt(batch * din_), z(batch * g4);
        for (std::size_t s = 0; s < len; ++s) {
            const std::size_t t = step_index(d, s, len);
            for (std::size_t b = 0; b < batch; ++b)
                for (std::size_t j = 0; j < din_; ++j)
                    xt[b * din_ + j] = x_.at(b, t, j);
            const T* hprev = dir.hs.data() + s * batch * h_;
            kernels::gemm_nn(xt.data(), dir.wx.data(), z.data(), batch, din_, g4);
            kernels::gemm_nn(hprev, dir.wh.data(), z.data(), batch, h_, g4, true);
            T* gates = dir.gates.data() + s * batch * g4;
            const T* cprev = dir.cs.data() + s * batch * h_;
            T* c = dir.cs.data() + (s + 1) * batch * h_;
            T* hcur = dir.hs.data() + (s + 1) * batch * h_;
            for (std::size_t b = 0; b < batch; ++b) {
                const T* zb = z.data() + b * g4;
                T* gb = gates + b * g4;
                for (std::size_t j = 0; j < h_; ++j) {
                    const T zi = zb[j] + dir.b[j];
                    const T zf = zb[h_ + j] + dir.b[h_ + j];
                    const T zg = zb[2 * h_ + j] + dir.b[2 * h_ + j];
                    const T zo = zb[3 * h_ + j] + dir.b[3 * h_ + j];
                    const T gi = T(1) / (T(1) + std::exp(-zi));
                    const T gf = T(1) / (T(1) + std::exp(-zf));
                    const T gg = std::tanh(zg);
                    const T go = T(1) / (T(1) + std::exp(-zo));
                    gb[j] = gi;
                    gb[h_ + j] = gf;
                    gb[2 * h_ + j] = gg;
                    gb[3 * h_ + j] = go;
                    const T cv = gf * cprev[b * h_ + j] + gi * gg;
                    c[b * h_ + j] = cv;
                    hcur[b * h_ + j] = go * std::tanh(cv);
                }
            }
        }
    }

    void backward_direction(int d, std::size_t batch, std::size_t len, const Tensor<T>& dy,
                            Tensor<T>& dx) {
        Direction& dir = dir_[d];
        const std::size_t g4 = 4 * h_;
        dir.gwx.fill(T(0));
        dir.gwh.fill(T(0));
        dir.gb.fill(T(0));
        std::vector<T> dh(batch * h_), dc(batch * h_, T(0));
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t j = 0; j < h_; ++j) dh[b * h_ + j] = dy.at(b, d * h_ + j);

        std::vector<T> dz(batch * g4), xt(batch * din_), dxt(batch * din_), dhprev(batch * h_);
        for (std::size_t s = len; s-- > 0;) {
            const std::size_t t = step_index(d, s, len);
            const T* gates = dir.gates.data() + s * batch * g4;
            const T* c = dir.cs.data() + (s + 1) * batch * h_;
            const T* cprev = dir.cs.data() + s * batch * h_;
            for (std::size_t b = 0; b < batch; ++b) {
                const T* gb = gates + b * g4;
                T* dzb = dz.data() + b * g4;
                for (std::size_t j = 0; j < h_; ++j) {
                    const T gi = gb[j], gf = gb[h_ + j], gg = gb[2 * h_ + j], go = gb[3 * h_ + j];
                    const T tc = std::tanh(c[b * h_ + j]);
                    const T dhv = dh[b * h_ + j];
                    const T dov = dhv * tc;
                    const T dcv = dc[b * h_ + j] + dhv * go * (T(1) - tc * tc);
                    const T div = dcv * gg;
                    const T dfv = dcv * cprev[b * h_ + j];
                    const T dgv = dcv * gi;
                    dzb[j] = div * gi * (T(1) - gi);
                    dzb[h_ + j] = dfv * gf * (T(1) - gf);
                    dzb[2 * h_ + j] = dgv * (T(1) - gg * gg);
                    dzb[3 * h_ + j] = dov * go * (T(1) - go);
                    dc[b * h_ + j] = dcv * gf;
                }
            }
            for (std::size_t b = 0; b < batch; ++b)
                for (std::size_t j = 0; j < din_; ++j) xt[b * din_ + j] = x_.at(b, t, j);
            const T* hprev = dir.hs.data() + s * batch * h_;
            kernels::gemm_tn(xt.data(), dz.data(), dir.gwx.data(), din_, batch, g4, true);
            kernels::gemm_tn(hprev, dz.data(), dir.gwh.data(), h_, batch, g4, true);
            for (std::size_t b = 0; b < batch; ++b)
                for (std::size_t j = 0; j < g4; ++j) dir.gb[j] += dz[b * g4 + j];
            kernels::gemm_nt(dz.data(), dir.wx.data(), dxt.data(), batch, g4, din_);
            for (std::size_t b = 0; b < batch; ++b)
                for (std::size_t j = 0; j < din_; ++j) dx.at(b, t, j) += dxt[b * din_ + j];
            kernels::gemm_nt(dz.data(), dir.wh.data(), dhprev.data(), batch, g4, h_);
            dh = dhprev;
        }
    }

    std::size_t din_, h_;
    Direction dir_[2];
    Tensor<T> x_;
};

enum class LossKind { bce, softmax_ce };

inline std::string to_string(LossKind k) {
    return k == LossKind::bce ? "bce" : "softmax_ce";
}

// A layer stack plus its loss convention.
template <typename T>
struct Model {
    std::vector<std::unique_ptr<Layer<T>>> layers;
    LossKind loss = LossKind::bce;

    Tensor<T> forward(const Tensor<T>& x, Ctx<T>& ctx) {
        Tensor<T> cur = x;
        for (auto& l : layers) cur = l->forward(cur, ctx);
        return cur;
    }

    // dy = dLoss/dOutput; stops early when a layer absorbs the gradient
    // (embedding lookup has no input gradient)
    void backward(const Tensor<T>& dy) {
        Tensor<T> cur = dy;
        for (std::size_t i = layers.size(); i-- > 0;) {
            cur = layers[i]->backward(cur);
            if (cur.numel() == 0 && i > 0)
                throw config_error("layer " + layers[i]->name() +
                                   " absorbed the gradient mid-stack");
        }
    }

    std::vector<ParamRef<T>> params() {
        std::vector<ParamRef<T>> out;
        for (auto& l : layers) l->collect_params(out);
        return out;
    }
};

} // namespace fnd

#endif
