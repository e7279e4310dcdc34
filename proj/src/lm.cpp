#include "logclone/lm.hpp"

#include "logclone/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace logclone::lm {

LmHyperparams LmHyperparams::paper_profile() {
    return LmHyperparams{};
}

LmHyperparams LmHyperparams::desk_profile() {
    LmHyperparams hp;
    hp.hidden = 64;
    hp.dense = 32;
    hp.embed = 32;
    hp.epochs = 50;
    hp.desk_scale = true;
    return hp;
}

void LmHyperparams::validate() const {
    if (hidden <= 0 || dense <= 0 || embed <= 0 || epochs <= 0 || batch_size <= 0 ||
        learning_rate <= 0.0)
        throw std::runtime_error("hyperparameters must be positive");
    if (!(dropout >= 0.0 && dropout < 1.0))
        throw std::runtime_error("dropout must be in [0, 1)");
}

double LanguageModel::sequence_log_prob(const std::vector<int>& sequence) const {
    double total = 0.0;
    std::vector<int> context;
    for (const int token : sequence) {
        const auto dist = next_token_distribution(context);
        total += std::log(dist.at(static_cast<std::size_t>(token)));
        context.push_back(token);
    }
    return total;
}

// ---------------------------------------------------------------------------
// n-gram model

NgramModel NgramModel::train(const std::vector<corpus::LsdSequence>& train,
                             const corpus::Vocabulary& vocab, int order, double k) {
    if (order < 1) throw std::runtime_error("n-gram order must be >= 1");
    if (k < 0.0) throw std::runtime_error("smoothing constant must be >= 0");
    if (train.empty()) throw std::runtime_error("n-gram training set is empty");

    NgramModel model;
    model.order_ = order;
    model.k_ = k;
    model.vocab_ = vocab;
    const int start = vocab.start_id();
    for (const auto& seq : train) {
        std::vector<int> ids(static_cast<std::size_t>(order - 1), start);
        for (const int id : vocab.encode(seq.tokens)) ids.push_back(id);
        for (std::size_t t = static_cast<std::size_t>(order - 1); t < ids.size(); ++t) {
            // every context suffix up to order-1 feeds backoff
            for (int len = 0; len <= order - 1; ++len) {
                std::vector<int> ctx(ids.begin() + static_cast<long>(t) - len,
                                     ids.begin() + static_cast<long>(t));
                ++model.counts_[ctx][ids[t]];
                ++model.totals_[ctx];
            }
        }
    }
    return model;
}

double NgramModel::conditional(const std::vector<int>& context, int token) const {
    const int v = vocab_.size();
    // pad to order-1 with the start symbol, then take the suffix
    std::vector<int> ctx(static_cast<std::size_t>(order_ - 1), vocab_.start_id());
    for (const int id : context) ctx.push_back(id);
    ctx.erase(ctx.begin(), ctx.end() - (order_ - 1));

    while (true) {
        const auto total_it = totals_.find(ctx);
        const long total = total_it == totals_.end() ? 0 : total_it->second;
        if (k_ > 0.0) {
            long count = 0;
            const auto it = counts_.find(ctx);
            if (it != counts_.end()) {
                const auto jt = it->second.find(token);
                if (jt != it->second.end()) count = jt->second;
            }
            return (static_cast<double>(count) + k_) /
                   (static_cast<double>(total) + k_ * static_cast<double>(v));
        }
        if (total > 0) {
            const auto it = counts_.find(ctx);
            long count = 0;
            if (it != counts_.end()) {
                const auto jt = it->second.find(token);
                if (jt != it->second.end()) count = jt->second;
            }
            return static_cast<double>(count) / static_cast<double>(total);
        }
        if (ctx.empty()) return 1.0 / static_cast<double>(v); // nothing observed
        ctx.erase(ctx.begin()); // back off
    }
}

std::vector<double> NgramModel::next_token_distribution(
    const std::vector<int>& context) const {
    std::vector<double> dist(static_cast<std::size_t>(vocab_.size()));
    for (int t = 0; t < vocab_.size(); ++t)
        dist[static_cast<std::size_t>(t)] = conditional(context, t);
    const double sum = std::accumulate(dist.begin(), dist.end(), 0.0);
    if (sum > 0.0)
        for (double& p : dist) p /= sum;
    return dist;
}

// ---------------------------------------------------------------------------
// recurrent model

namespace {

struct Layout {
    int v, e, h, d;
    std::size_t embed, w1, b1, w2, b2, wd, bd, wo, bo, total;

    explicit Layout(const corpus::Vocabulary& vocab, const LmHyperparams& hp)
        : v(vocab.size()), e(hp.embed), h(hp.hidden), d(hp.dense) {
        std::size_t off = 0;
        auto claim = [&off](std::size_t n) {
            const std::size_t at = off;
            off += n;
            return at;
        };
        embed = claim(static_cast<std::size_t>(v + 1) * e); // +1: start row
        w1 = claim(static_cast<std::size_t>(4 * h) * (e + h));
        b1 = claim(static_cast<std::size_t>(4 * h));
        w2 = claim(static_cast<std::size_t>(4 * h) * (2 * h));
        b2 = claim(static_cast<std::size_t>(4 * h));
        wd = claim(static_cast<std::size_t>(d) * h);
        bd = claim(static_cast<std::size_t>(d));
        wo = claim(static_cast<std::size_t>(v) * d);
        bo = claim(static_cast<std::size_t>(v));
        total = off;
    }
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y = W x + b, W row-major (rows x cols)
void affine(const double* w, const double* b, const double* x, double* y, int rows,
            int cols) {
    for (int r = 0; r < rows; ++r) {
        double acc = b ? b[r] : 0.0;
        const double* row = w + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

// dW += dy x^T, db += dy, dx += W^T dy
void affine_backward(const double* w, const double* x, const double* dy, double* dw,
                     double* db, double* dx, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double g = dy[r];
        double* dw_row = dw + static_cast<std::size_t>(r) * cols;
        const double* w_row = w + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) {
            dw_row[c] += g * x[c];
            if (dx) dx[c] += w_row[c] * g;
        }
        if (db) db[r] += g;
    }
}

struct LstmStepCache {
    std::vector<double> z;     // input ++ h_prev
    std::vector<double> gates; // i, f, g, o after activation
    std::vector<double> c, h, tanh_c;
};

// one LSTM step; gate order i, f, g, o
void lstm_step(const double* w, const double* b, const std::vector<double>& input,
               const std::vector<double>& h_prev, const std::vector<double>& c_prev,
               int hidden, LstmStepCache& cache) {
    const int in = static_cast<int>(input.size());
    cache.z.assign(input.begin(), input.end());
    cache.z.insert(cache.z.end(), h_prev.begin(), h_prev.end());
    std::vector<double> pre(static_cast<std::size_t>(4 * hidden));
    affine(w, b, cache.z.data(), pre.data(), 4 * hidden, in + hidden);
    cache.gates.resize(static_cast<std::size_t>(4 * hidden));
    cache.c.resize(static_cast<std::size_t>(hidden));
    cache.h.resize(static_cast<std::size_t>(hidden));
    cache.tanh_c.resize(static_cast<std::size_t>(hidden));
    for (int j = 0; j < hidden; ++j) {
        const double i_g = sigmoid(pre[j]);
        const double f_g = sigmoid(pre[hidden + j]);
        const double g_g = std::tanh(pre[2 * hidden + j]);
        const double o_g = sigmoid(pre[3 * hidden + j]);
        cache.gates[j] = i_g;
        cache.gates[hidden + j] = f_g;
        cache.gates[2 * hidden + j] = g_g;
        cache.gates[3 * hidden + j] = o_g;
        cache.c[j] = f_g * c_prev[j] + i_g * g_g;
        cache.tanh_c[j] = std::tanh(cache.c[j]);
        cache.h[j] = o_g * cache.tanh_c[j];
    }
}

// backward through one step; dh is the incoming h-gradient, dc carries the
// cell gradient across time (updated in place); dx/dh_prev are outputs
void lstm_step_backward(const double* w, const LstmStepCache& cache,
                        const std::vector<double>& c_prev,
                        const std::vector<double>& dh, std::vector<double>& dc,
                        double* dw, double* db, std::vector<double>& dx,
                        std::vector<double>& dh_prev, int hidden, int in) {
    std::vector<double> da(static_cast<std::size_t>(4 * hidden));
    for (int j = 0; j < hidden; ++j) {
        const double i_g = cache.gates[j];
        const double f_g = cache.gates[hidden + j];
        const double g_g = cache.gates[2 * hidden + j];
        const double o_g = cache.gates[3 * hidden + j];
        const double dcj = dh[j] * o_g * (1.0 - cache.tanh_c[j] * cache.tanh_c[j]) + dc[j];
        da[j] = dcj * g_g * i_g * (1.0 - i_g);
        da[hidden + j] = dcj * c_prev[j] * f_g * (1.0 - f_g);
        da[2 * hidden + j] = dcj * i_g * (1.0 - g_g * g_g);
        da[3 * hidden + j] = dh[j] * cache.tanh_c[j] * o_g * (1.0 - o_g);
        dc[j] = dcj * f_g;
    }
    std::vector<double> dz(static_cast<std::size_t>(in + hidden), 0.0);
    affine_backward(w, cache.z.data(), da.data(), dw, db, dz.data(), 4 * hidden,
                    in + hidden);
    dx.assign(dz.begin(), dz.begin() + in);
    dh_prev.assign(dz.begin() + in, dz.end());
}

std::vector<double> softmax(const std::vector<double>& logits) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) sum += p[i] = std::exp(logits[i] - mx);
    for (double& x : p) x /= sum;
    return p;
}

} // namespace

RecurrentModel::RecurrentModel(corpus::Vocabulary vocab, const LmHyperparams& hp)
    : vocab_(std::move(vocab)), hp_(hp) {
    hp_.validate();
    params_.assign(Layout(vocab_, hp_).total, 0.0);
}

void RecurrentModel::init_parameters(std::mt19937_64& rng) {
    const Layout L(vocab_, hp_);
    auto fill = [&](std::size_t off, std::size_t n, int fan_in, int fan_out) {
        const double s = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-s, s);
        for (std::size_t i = 0; i < n; ++i) params_[off + i] = dist(rng);
    };
    fill(L.embed, static_cast<std::size_t>(L.v + 1) * L.e, L.v, L.e);
    fill(L.w1, static_cast<std::size_t>(4 * L.h) * (L.e + L.h), L.e + L.h, L.h);
    fill(L.w2, static_cast<std::size_t>(4 * L.h) * (2 * L.h), 2 * L.h, L.h);
    fill(L.wd, static_cast<std::size_t>(L.d) * L.h, L.h, L.d);
    fill(L.wo, static_cast<std::size_t>(L.v) * L.d, L.d, L.v);
    // forget-gate bias starts positive so early cells retain state
    for (int j = 0; j < L.h; ++j) {
        params_[L.b1 + L.h + j] = 1.0;
        params_[L.b2 + L.h + j] = 1.0;
    }
}

double RecurrentModel::loss_and_gradient(const std::vector<std::vector<int>>& sequences,
                                         std::vector<double>& grad,
                                         std::mt19937_64* dropout_rng) const {
    const Layout L(vocab_, hp_);
    grad.assign(L.total, 0.0);
    const double* P = params_.data();
    double* G = grad.data();
    const double keep = 1.0 - hp_.dropout;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double loss = 0.0;
    long tokens = 0;

    for (const auto& seq : sequences) {
        if (seq.empty()) continue;
        const std::size_t steps = seq.size();
        // inputs: start, seq[0..n-2]; targets: seq[0..n-1]
        std::vector<int> inputs(steps);
        inputs[0] = vocab_.start_id();
        for (std::size_t t = 1; t < steps; ++t) inputs[t] = seq[t - 1];

        std::vector<LstmStepCache> c1(steps), c2(steps);
        std::vector<std::vector<double>> xs(steps), h1d(steps), h2d(steps),
            mask1(steps), mask2(steps), dense_pre(steps), dense_out(steps),
            probs(steps);
        std::vector<double> h1(static_cast<std::size_t>(L.h), 0.0), c1s = h1,
                            h2 = h1, c2s = h1;

        for (std::size_t t = 0; t < steps; ++t) {
            const double* row = P + L.embed + static_cast<std::size_t>(inputs[t]) * L.e;
            xs[t].assign(row, row + L.e);
            lstm_step(P + L.w1, P + L.b1, xs[t], h1, c1s, L.h, c1[t]);
            h1 = c1[t].h;
            c1s = c1[t].c;
            mask1[t].assign(static_cast<std::size_t>(L.h), 1.0);
            if (dropout_rng && hp_.dropout > 0.0)
                for (double& m : mask1[t]) m = unit(*dropout_rng) < keep ? 1.0 / keep : 0.0;
            h1d[t].resize(static_cast<std::size_t>(L.h));
            for (int j = 0; j < L.h; ++j) h1d[t][j] = h1[j] * mask1[t][j];

            lstm_step(P + L.w2, P + L.b2, h1d[t], h2, c2s, L.h, c2[t]);
            h2 = c2[t].h;
            c2s = c2[t].c;
            mask2[t].assign(static_cast<std::size_t>(L.h), 1.0);
            if (dropout_rng && hp_.dropout > 0.0)
                for (double& m : mask2[t]) m = unit(*dropout_rng) < keep ? 1.0 / keep : 0.0;
            h2d[t].resize(static_cast<std::size_t>(L.h));
            for (int j = 0; j < L.h; ++j) h2d[t][j] = h2[j] * mask2[t][j];

            dense_pre[t].resize(static_cast<std::size_t>(L.d));
            affine(P + L.wd, P + L.bd, h2d[t].data(), dense_pre[t].data(), L.d, L.h);
            dense_out[t] = dense_pre[t];
            for (double& x : dense_out[t]) x = std::max(0.0, x);

            std::vector<double> logits(static_cast<std::size_t>(L.v));
            affine(P + L.wo, P + L.bo, dense_out[t].data(), logits.data(), L.v, L.d);
            probs[t] = softmax(logits);
            loss -= std::log(std::max(probs[t][static_cast<std::size_t>(seq[t])], 1e-300));
            ++tokens;
        }

        // backward through the sequence
        const std::vector<double> zeros(static_cast<std::size_t>(L.h), 0.0);
        std::vector<double> dh1 = zeros, dc1 = zeros, dh2 = zeros, dc2 = zeros;
        for (std::size_t ti = steps; ti-- > 0;) {
            std::vector<double> dlogits = probs[ti];
            dlogits[static_cast<std::size_t>(seq[ti])] -= 1.0;

            std::vector<double> ddense(static_cast<std::size_t>(L.d), 0.0);
            affine_backward(P + L.wo, dense_out[ti].data(), dlogits.data(), G + L.wo,
                            G + L.bo, ddense.data(), L.v, L.d);
            for (int j = 0; j < L.d; ++j)
                if (dense_pre[ti][j] <= 0.0) ddense[j] = 0.0;

            std::vector<double> dh2d(static_cast<std::size_t>(L.h), 0.0);
            affine_backward(P + L.wd, h2d[ti].data(), ddense.data(), G + L.wd, G + L.bd,
                            dh2d.data(), L.d, L.h);

            std::vector<double> dh2_total = dh2;
            for (int j = 0; j < L.h; ++j) dh2_total[j] += dh2d[j] * mask2[ti][j];

            const std::vector<double>& c2_prev = ti == 0 ? zeros : c2[ti - 1].c;
            std::vector<double> dh1d, dh2_prev;
            lstm_step_backward(P + L.w2, c2[ti], c2_prev, dh2_total, dc2, G + L.w2,
                               G + L.b2, dh1d, dh2_prev, L.h, L.h);
            dh2 = dh2_prev;

            std::vector<double> dh1_total = dh1;
            for (int j = 0; j < L.h; ++j) dh1_total[j] += dh1d[j] * mask1[ti][j];

            const std::vector<double>& c1_prev = ti == 0 ? zeros : c1[ti - 1].c;
            std::vector<double> dx, dh1_prev;
            lstm_step_backward(P + L.w1, c1[ti], c1_prev, dh1_total, dc1, G + L.w1,
                               G + L.b1, dx, dh1_prev, L.h, L.e);
            dh1 = dh1_prev;

            double* erow = G + L.embed + static_cast<std::size_t>(inputs[ti]) * L.e;
            for (int j = 0; j < L.e; ++j) erow[j] += dx[j];
        }
    }

    if (tokens == 0) return 0.0;
    const double scale = 1.0 / static_cast<double>(tokens);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= scale;
    return loss * scale;
}

void RecurrentModel::run_training(const std::vector<std::vector<int>>& sequences) {
    std::mt19937_64 rng(hp_.seed);
    init_parameters(rng);
    std::mt19937_64 dropout_rng(hp_.seed ^ 0x9e3779b97f4a7c15ULL);

    std::vector<std::size_t> order(sequences.size());
    std::iota(order.begin(), order.end(), 0);

    double lr = hp_.learning_rate;
    double best = std::numeric_limits<double>::infinity();
    int stall = 0;
    std::vector<double> grad;

    for (int epoch = 0; epoch < hp_.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        long batches = 0;
        for (std::size_t at = 0; at < order.size(); at += hp_.batch_size) {
            std::vector<std::vector<int>> batch;
            for (std::size_t i = at; i < order.size() &&
                                     i < at + static_cast<std::size_t>(hp_.batch_size);
                 ++i)
                batch.push_back(sequences[order[i]]);
            const double loss = loss_and_gradient(batch, grad, &dropout_rng);
            if (!std::isfinite(loss))
                throw std::runtime_error("recurrent training diverged (non-finite loss)");
            epoch_loss += loss;
            ++batches;

            double norm2 = 0.0;
            for (const double g : grad) norm2 += g * g;
            const double norm = std::sqrt(norm2);
            const double clip = norm > 5.0 ? 5.0 / norm : 1.0;
            for (std::size_t i = 0; i < params_.size(); ++i)
                params_[i] -= lr * clip * grad[i];
        }
        epoch_loss /= static_cast<double>(std::max(batches, 1L));
        loss_curve_.push_back(epoch_loss);
        if (epoch_loss < best - 1e-4) {
            best = epoch_loss;
            stall = 0;
        } else if (++stall >= 3) { // plateau: halve the learning rate
            lr *= 0.5;
            stall = 0;
        }
    }
}

RecurrentModel RecurrentModel::train(const std::vector<corpus::LsdSequence>& train,
                                     const corpus::Vocabulary& vocab,
                                     const LmHyperparams& hp) {
    if (train.empty()) throw std::runtime_error("recurrent training set is empty");
    RecurrentModel model(vocab, hp);
    std::vector<std::vector<int>> sequences;
    sequences.reserve(train.size());
    for (const auto& seq : train) sequences.push_back(vocab.encode(seq.tokens));
    model.run_training(sequences);
    return model;
}

std::vector<double> RecurrentModel::next_token_distribution(
    const std::vector<int>& context) const {
    const Layout L(vocab_, hp_);
    const double* P = params_.data();
    std::vector<double> h1(static_cast<std::size_t>(L.h), 0.0), c1s = h1, h2 = h1,
                        c2s = h1;
    LstmStepCache s1, s2;
    std::vector<int> inputs{vocab_.start_id()};
    inputs.insert(inputs.end(), context.begin(), context.end());
    std::vector<double> x(static_cast<std::size_t>(L.e));
    for (const int id : inputs) {
        const double* row = P + L.embed + static_cast<std::size_t>(id) * L.e;
        x.assign(row, row + L.e);
        lstm_step(P + L.w1, P + L.b1, x, h1, c1s, L.h, s1);
        h1 = s1.h;
        c1s = s1.c;
        lstm_step(P + L.w2, P + L.b2, h1, h2, c2s, L.h, s2);
        h2 = s2.h;
        c2s = s2.c;
    }
    std::vector<double> dense(static_cast<std::size_t>(L.d));
    affine(P + L.wd, P + L.bd, h2.data(), dense.data(), L.d, L.h);
    for (double& v : dense) v = std::max(0.0, v);
    std::vector<double> logits(static_cast<std::size_t>(L.v));
    affine(P + L.wo, P + L.bo, dense.data(), logits.data(), L.v, L.d);
    return softmax(logits);
}

// ---------------------------------------------------------------------------
// model files: one JSON header line, then little-endian doubles

namespace {

nlohmann::ordered_json header_json(const std::string& kind, const LmHyperparams& hp,
                                   std::uint64_t vocab_hash) {
    return {{"format_version", 1},
            {"model_kind", kind},
            {"hyperparams",
             {{"hidden", hp.hidden},
              {"dense", hp.dense},
              {"embed", hp.embed},
              {"dropout", hp.dropout},
              {"epochs", hp.epochs},
              {"batch_size", hp.batch_size},
              {"learning_rate", hp.learning_rate},
              {"seed", hp.seed},
              {"desk_scale", hp.desk_scale}}},
            {"vocab_hash", vocab_hash}};
}

nlohmann::json read_header(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty model file: " + path);
    return nlohmann::json::parse(line);
}

void check_header(const nlohmann::json& h, const std::string& kind,
                  const corpus::Vocabulary& vocab, const std::string& path) {
    if (h.at("format_version").get<int>() != 1)
        throw std::runtime_error("unsupported model format version in " + path);
    if (h.at("model_kind").get<std::string>() != kind)
        throw std::runtime_error("model kind mismatch in " + path);
    if (h.at("vocab_hash").get<std::uint64_t>() != vocab.hash())
        throw std::runtime_error("model/vocabulary mismatch in " + path);
}

LmHyperparams hyperparams_from(const nlohmann::json& h) {
    const auto& j = h.at("hyperparams");
    LmHyperparams hp;
    hp.hidden = j.at("hidden").get<int>();
    hp.dense = j.at("dense").get<int>();
    hp.embed = j.at("embed").get<int>();
    hp.dropout = j.at("dropout").get<double>();
    hp.epochs = j.at("epochs").get<int>();
    hp.batch_size = j.at("batch_size").get<int>();
    hp.learning_rate = j.at("learning_rate").get<double>();
    hp.seed = j.at("seed").get<std::uint64_t>();
    hp.desk_scale = j.at("desk_scale").get<bool>();
    return hp;
}

} // namespace

void RecurrentModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << header_json("recurrent", hp_, vocab_.hash()).dump() << '\n';
    const std::uint64_t n = params_.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(params_.data()),
              static_cast<std::streamsize>(n * sizeof(double)));
}

RecurrentModel RecurrentModel::load(const std::string& path,
                                    const corpus::Vocabulary& vocab) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    const auto h = read_header(in, path);
    check_header(h, "recurrent", vocab, path);
    RecurrentModel model(vocab, hyperparams_from(h));
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (n != model.params_.size())
        throw std::runtime_error("parameter count mismatch in " + path);
    in.read(reinterpret_cast<char*>(model.params_.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw std::runtime_error("truncated model file: " + path);
    return model;
}

void NgramModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    LmHyperparams hp; // n-gram reuses the header shape; only seed matters
    nlohmann::ordered_json header = header_json("ngram", hp, vocab_.hash());
    header["order"] = order_;
    header["smoothing"] = k_;
    out << header.dump() << '\n';
    for (const auto& [ctx, nexts] : counts_) {
        for (const auto& [token, count] : nexts) {
            for (const int id : ctx) out << id << ' ';
            out << "| " << token << ' ' << count << '\n';
        }
    }
}

NgramModel NgramModel::load(const std::string& path, const corpus::Vocabulary& vocab) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    const auto h = read_header(in, path);
    check_header(h, "ngram", vocab, path);
    NgramModel model;
    model.order_ = h.at("order").get<int>();
    model.k_ = h.at("smoothing").get<double>();
    model.vocab_ = vocab;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<int> ctx;
        std::string tok;
        while (ls >> tok && tok != "|") ctx.push_back(std::stoi(tok));
        int token = 0;
        long count = 0;
        ls >> token >> count;
        model.counts_[ctx][token] = count;
        model.totals_[ctx] += count;
    }
    return model;
}

std::unique_ptr<LanguageModel> load_model(const std::string& path,
                                          const corpus::Vocabulary& vocab) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    const auto h = read_header(in, path);
    const std::string kind = h.at("model_kind").get<std::string>();
    if (kind == "recurrent")
        return std::make_unique<RecurrentModel>(RecurrentModel::load(path, vocab));
    if (kind == "ngram")
        return std::make_unique<NgramModel>(NgramModel::load(path, vocab));
    throw std::runtime_error("unknown model kind in " + path);
}

// ---------------------------------------------------------------------------
// decoding

std::vector<GeneratedCandidate> generate(const LanguageModel& model,
                                         const std::vector<std::string>& seed,
                                         int context_width, int beam_width,
                                         int max_len) {
    if (beam_width < 1) throw std::runtime_error("generate: beam_width must be >= 1");
    if (context_width < 1) throw std::runtime_error("generate: context_width must be >= 1");
    std::vector<std::string> seed_tokens = seed;
    std::erase(seed_tokens, std::string(metrics::kEndMarker));
    if (seed_tokens.empty()) throw std::runtime_error("generate: empty seed");

    const corpus::Vocabulary& vocab = model.vocab();
    const std::vector<int> seed_ids = vocab.encode(seed_tokens);

    struct Beam {
        std::vector<int> tokens;
        double log_prob = 0.0;
        bool finished = false;
    };
    std::vector<Beam> beams{Beam{{seed_ids.front()}, 0.0, false}};

    auto context_for = [&](const Beam& beam) {
        // seed tokens drive the window while they last, then the beam's own
        const std::size_t len = beam.tokens.size();
        std::vector<int> window;
        const std::size_t from =
            len > static_cast<std::size_t>(context_width) ? len - context_width : 0;
        for (std::size_t p = from; p < len; ++p)
            window.push_back(p < seed_ids.size() ? seed_ids[p] : beam.tokens[p]);
        return window;
    };

    while (std::any_of(beams.begin(), beams.end(),
                       [](const Beam& b) { return !b.finished; })) {
        std::vector<Beam> next;
        for (const Beam& beam : beams) {
            if (beam.finished) {
                next.push_back(beam);
                continue;
            }
            const auto dist = model.next_token_distribution(context_for(beam));
            std::vector<int> by_prob(dist.size());
            std::iota(by_prob.begin(), by_prob.end(), 0);
            std::sort(by_prob.begin(), by_prob.end(), [&dist](int a, int b) {
                if (dist[static_cast<std::size_t>(a)] != dist[static_cast<std::size_t>(b)])
                    return dist[static_cast<std::size_t>(a)] >
                           dist[static_cast<std::size_t>(b)];
                return a < b;
            });
            for (int k = 0; k < beam_width && k < static_cast<int>(by_prob.size()); ++k) {
                const int token = by_prob[static_cast<std::size_t>(k)];
                const double p = dist[static_cast<std::size_t>(token)];
                if (p <= 0.0) continue;
                Beam child = beam;
                child.tokens.push_back(token);
                child.log_prob += std::log(p);
                child.finished = token == corpus::Vocabulary::kEos ||
                                 static_cast<int>(child.tokens.size()) >= max_len;
                next.push_back(std::move(child));
            }
        }
        std::sort(next.begin(), next.end(), [&vocab](const Beam& a, const Beam& b) {
            if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
            return vocab.decode(a.tokens) < vocab.decode(b.tokens);
        });
        if (static_cast<int>(next.size()) > beam_width)
            next.resize(static_cast<std::size_t>(beam_width));
        beams = std::move(next);
    }

    std::vector<GeneratedCandidate> out;
    for (const Beam& beam : beams)
        out.push_back({vocab.decode(beam.tokens), beam.log_prob});
    return out;
}

const char* variant_name(SuggestVariant v) {
    switch (v) {
    case SuggestVariant::NoNlp: return "no_nlp";
    case SuggestVariant::Nlp1: return "nlp_1";
    case SuggestVariant::Nlp3: return "nlp_3";
    }
    return "?";
}

SuggestVariant variant_from_name(const std::string& name) {
    if (name == "no_nlp") return SuggestVariant::NoNlp;
    if (name == "nlp_1") return SuggestVariant::Nlp1;
    if (name == "nlp_3") return SuggestVariant::Nlp3;
    throw std::runtime_error("unknown suggestion variant: " + name);
}

std::vector<GeneratedCandidate> suggest_lsd(const corpus::TestCase& test_case,
                                            const LanguageModel& model,
                                            SuggestVariant variant) {
    switch (variant) {
    case SuggestVariant::NoNlp:
        return {GeneratedCandidate{test_case.seed_lsd.tokens, 0.0}};
    case SuggestVariant::Nlp1:
        return generate(model, test_case.seed_lsd.tokens, 1, 1);
    case SuggestVariant::Nlp3:
        return generate(model, test_case.seed_lsd.tokens, 3, 3);
    }
    return {};
}

} // namespace logclone::lm
