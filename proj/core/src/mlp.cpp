#include "incmeter/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "incmeter/errors.hpp"
#include "incmeter/metrics.hpp"

namespace incmeter {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

void fill_uniform(Rng& rng, double bound, Eigen::Index rows, Eigen::Index cols,
                  auto& matrix) {
    matrix.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            matrix(i, j) = rng.uniform_real(-bound, bound);
        }
    }
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct BatchCache {
    RowMat t1, h1, t2, h2; // batch x hidden
    RowMat m1, m2;         // dropout multipliers, only when training
    Eigen::VectorXd yhat;
};

void draw_dropout(Rng& rng, double rate, RowMat& mask) {
    const double inv_keep = 1.0 / (1.0 - rate);
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
        for (Eigen::Index j = 0; j < mask.cols(); ++j) {
            mask(i, j) = rng.bernoulli(rate) ? 0.0 : inv_keep;
        }
    }
}

void forward_tail(const MlpModel& model, bool training, Rng* rng, BatchCache& c) {
    const Eigen::Index batch = c.t1.rows();
    c.t1 = c.t1.array().tanh();
    if (training) {
        c.m1.resize(batch, model.hidden_size());
        draw_dropout(*rng, model.dropout_rate, c.m1);
        c.h1 = c.t1.cwiseProduct(c.m1);
    } else {
        c.h1 = c.t1;
    }
    c.t2 = ((c.h1 * model.w2).rowwise() + model.b2.transpose()).array().tanh();
    if (training) {
        c.m2.resize(batch, model.hidden_size());
        draw_dropout(*rng, model.dropout_rate, c.m2);
        c.h2 = c.t2.cwiseProduct(c.m2);
    } else {
        c.h2 = c.t2;
    }
    c.yhat = (c.h2 * model.w3).array() + model.b3;
}

void forward_sparse(const MlpModel& model,
                    std::span<const std::vector<std::uint32_t>* const> rows,
                    bool training, Rng* rng, BatchCache& c) {
    const auto batch = static_cast<Eigen::Index>(rows.size());
    c.t1.resize(batch, model.hidden_size());
    for (Eigen::Index b = 0; b < batch; ++b) {
        c.t1.row(b) = model.b1.transpose();
        for (std::uint32_t j : *rows[static_cast<std::size_t>(b)]) {
            c.t1.row(b) += model.w1.row(j);
        }
    }
    forward_tail(model, training, rng, c);
}

void forward_dense(const MlpModel& model, const Eigen::MatrixXd& x, bool training,
                   Rng* rng, BatchCache& c) {
    c.t1 = (x * model.w1).rowwise() + model.b1.transpose();
    forward_tail(model, training, rng, c);
}

/// Backpropagates d loss / d yhat down to d loss / d pre-activation of
/// layer 1 (returned); fills everything except the input-layer weights.
RowMat backward_tail(const MlpModel& model, const BatchCache& c,
                     const Eigen::VectorXd& dy, bool training, MlpGradients& g) {
    g.w3 = c.h2.transpose() * dy;
    g.b3 = dy.sum();
    RowMat dh2 = dy * model.w3.transpose();
    if (training) dh2 = dh2.cwiseProduct(c.m2);
    RowMat dpre2 = dh2.cwiseProduct((1.0 - c.t2.array().square()).matrix());
    g.w2 = c.h1.transpose() * dpre2;
    g.b2 = dpre2.colwise().sum();
    RowMat dh1 = dpre2 * model.w2.transpose();
    if (training) dh1 = dh1.cwiseProduct(c.m1);
    RowMat dpre1 = dh1.cwiseProduct((1.0 - c.t1.array().square()).matrix());
    g.b1 = dpre1.colwise().sum();
    return dpre1;
}

/// AdamW step with bias correction; wd = 0 for biases.
void adamw_update(double* w, const double* grad, double* m, double* v,
                  std::ptrdiff_t n, double lr, double wd, double c1, double c2) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double gi = grad[i];
        const double mi = m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * gi;
        const double vi = v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * gi * gi;
        w[i] -= lr * ((mi * c1) / (std::sqrt(vi * c2) + kAdamEps) + wd * w[i]);
    }
}

/// Same step for parameters whose gradient is exactly zero this batch.
void adamw_update_zero(double* w, double* m, double* v, std::ptrdiff_t n, double lr,
                       double wd, double c1, double c2) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double mi = m[i] *= kBeta1;
        const double vi = v[i] *= kBeta2;
        w[i] -= lr * ((mi * c1) / (std::sqrt(vi * c2) + kAdamEps) + wd * w[i]);
    }
}

} // namespace

MlpModel make_mlp(Eigen::Index input_width, Eigen::Index hidden, std::uint64_t seed) {
    if (input_width <= 0 || hidden <= 0) {
        throw std::invalid_argument("make_mlp: non-positive dimensions");
    }
    Rng rng(seed);
    MlpModel model;
    fill_uniform(rng, std::sqrt(6.0 / static_cast<double>(input_width + hidden)),
                 input_width, hidden, model.w1);
    model.b1 = Eigen::VectorXd::Zero(hidden);
    fill_uniform(rng, std::sqrt(6.0 / static_cast<double>(hidden + hidden)), hidden,
                 hidden, model.w2);
    model.b2 = Eigen::VectorXd::Zero(hidden);
    Eigen::MatrixXd w3;
    fill_uniform(rng, std::sqrt(6.0 / static_cast<double>(hidden + 1)), hidden, 1, w3);
    model.w3 = w3.col(0);
    model.b3 = 0.0;
    return model;
}

double mlp_forward(const MlpModel& model, const Eigen::VectorXd& x, bool training,
                   Rng* rng, MlpActivations* cache) {
    if (x.size() != model.input_width()) {
        throw DimensionError("mlp_forward: input width " + std::to_string(x.size()) +
                             ", model expects " + std::to_string(model.input_width()));
    }
    if (training && rng == nullptr) {
        throw std::invalid_argument("mlp_forward: training requires an rng");
    }
    BatchCache c;
    forward_dense(model, x.transpose(), training, rng, c);
    if (cache) {
        cache->t1 = c.t1.row(0);
        cache->h1 = c.h1.row(0);
        cache->t2 = c.t2.row(0);
        cache->h2 = c.h2.row(0);
    }
    return c.yhat(0);
}

LossResult custom_loss(const Eigen::VectorXd& predictions,
                       const Eigen::VectorXd& targets,
                       const std::vector<Eigen::MatrixXd>& heuristic_features,
                       ConstraintWeighting weighting) {
    if (predictions.size() != targets.size()) {
        throw DimensionError("custom_loss: length mismatch");
    }
    const Eigen::Index batch = predictions.size();
    if (batch == 0) throw DimensionError("custom_loss: empty batch");
    for (const auto& block : heuristic_features) {
        if (block.rows() != batch) {
            throw DimensionError("custom_loss: heuristic feature rows mismatch");
        }
    }
    const Eigen::VectorXd err = predictions - targets;
    const double inv_batch = 1.0 / static_cast<double>(batch);

    LossResult result;
    result.grad.resize(batch);
    if (weighting == ConstraintWeighting::BatchMean) {
        const double l_pred = err.cwiseAbs().mean();
        // L* = L_pred * (1 + sum over heuristics and features of the
        // batch-mean flag value); flag means are constants w.r.t. the
        // predictions, so the gradient scales by the same factor.
        double factor = 1.0;
        for (const auto& block : heuristic_features) {
            factor += block.sum() * inv_batch;
        }
        result.value = l_pred * factor;
        for (Eigen::Index i = 0; i < batch; ++i) {
            result.grad(i) = sign(err(i)) * inv_batch * factor;
        }
    } else {
        Eigen::VectorXd weight = Eigen::VectorXd::Ones(batch);
        for (const auto& block : heuristic_features) {
            weight += block.rowwise().sum();
        }
        result.value = weight.cwiseProduct(err.cwiseAbs()).mean();
        for (Eigen::Index i = 0; i < batch; ++i) {
            result.grad(i) = sign(err(i)) * weight(i) * inv_batch;
        }
    }
    return result;
}

std::vector<Eigen::MatrixXd> heuristic_features(const EncodedDataset& data,
                                                std::span<const std::size_t> rows) {
    std::vector<Eigen::MatrixXd> blocks;
    const auto batch = static_cast<Eigen::Index>(rows.size());
    if (data.schema.consistency) {
        Eigen::MatrixXd block(batch, 1);
        for (Eigen::Index b = 0; b < batch; ++b) {
            block(b, 0) = data.rows[rows[static_cast<std::size_t>(b)]].consistent;
        }
        blocks.push_back(std::move(block));
    }
    if (!data.schema.upper_bound_values.empty()) {
        const auto& values = data.schema.upper_bound_values;
        Eigen::MatrixXd block =
            Eigen::MatrixXd::Zero(batch, static_cast<Eigen::Index>(values.size()));
        for (Eigen::Index b = 0; b < batch; ++b) {
            const auto& row = data.rows[rows[static_cast<std::size_t>(b)]];
            if (row.upper_bound) {
                auto it = std::lower_bound(values.begin(), values.end(), *row.upper_bound);
                if (it != values.end() && *it == *row.upper_bound) {
                    block(b, it - values.begin()) = 1.0;
                }
            }
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

double mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& y,
                              const std::vector<Eigen::MatrixXd>& heuristics,
                              ConstraintWeighting weighting, MlpGradients& grads) {
    if (x.cols() != model.input_width()) {
        throw DimensionError("mlp_loss_and_gradients: width mismatch");
    }
    BatchCache c;
    forward_dense(model, x, false, nullptr, c);
    LossResult loss = custom_loss(c.yhat, y, heuristics, weighting);
    RowMat dpre1 = backward_tail(model, c, loss.grad, false, grads);
    grads.w1 = x.transpose() * dpre1;
    return loss.value;
}

namespace {

struct AdamMoments {
    RowMat m_w1, v_w1;
    Eigen::VectorXd m_b1, v_b1;
    Eigen::MatrixXd m_w2, v_w2;
    Eigen::VectorXd m_b2, v_b2;
    Eigen::VectorXd m_w3, v_w3;
    double m_b3 = 0.0, v_b3 = 0.0;

    explicit AdamMoments(const MlpModel& model) {
        m_w1 = RowMat::Zero(model.w1.rows(), model.w1.cols());
        v_w1 = m_w1;
        m_b1 = Eigen::VectorXd::Zero(model.b1.size());
        v_b1 = m_b1;
        m_w2 = Eigen::MatrixXd::Zero(model.w2.rows(), model.w2.cols());
        v_w2 = m_w2;
        m_b2 = Eigen::VectorXd::Zero(model.b2.size());
        v_b2 = m_b2;
        m_w3 = Eigen::VectorXd::Zero(model.w3.size());
        v_w3 = m_w3;
    }
};

} // namespace

TrainResult train_mlp(const EncodedDataset& data,
                      std::span<const std::size_t> train_rows,
                      std::span<const std::size_t> val_rows, const TrainSpec& spec) {
    if (train_rows.empty() || val_rows.empty()) {
        throw std::invalid_argument("train_mlp: empty train or validation set");
    }
    if (spec.batch_size < 1 || spec.hidden_size < 1 || spec.max_epochs < 1) {
        throw std::invalid_argument("train_mlp: bad spec");
    }
    const auto width = static_cast<Eigen::Index>(data.width());
    const Eigen::Index hidden = spec.hidden_size;

    // Full active-column lists (vocabulary bits plus flag columns).
    std::vector<std::vector<std::uint32_t>> active(data.rows.size());
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        active[i] = data.rows[i].kb_bits_on;
        for (std::uint32_t j : data.flag_columns_on(data.rows[i])) {
            active[i].push_back(j);
        }
    }

    MlpModel model = make_mlp(width, hidden, derive_seed(spec.seed, 0));
    AdamMoments moments(model);
    MlpGradients grads;
    grads.w1 = RowMat::Zero(width, hidden);
    std::vector<std::uint32_t> touched;
    touched.reserve(64);

    Rng rng(derive_seed(spec.seed, 1));
    std::vector<std::size_t> order(train_rows.begin(), train_rows.end());
    const std::vector<std::size_t> val_ids(val_rows.begin(), val_rows.end());

    const bool constrained = spec.loss == LossMode::L1PlusConstraints;
    const double lr = spec.learning_rate;
    const double wd = spec.weight_decay;

    TrainResult result;
    TrainingLog& log = result.log;
    double best_val = std::numeric_limits<double>::infinity();
    int epochs_since_best = 0;
    long step = 0;

    BatchCache cache;
    for (int epoch = 0; epoch < spec.max_epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(spec.batch_size)) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(spec.batch_size));
            const std::span<const std::size_t> batch_ids(order.data() + begin,
                                                         end - begin);
            const auto batch = static_cast<Eigen::Index>(batch_ids.size());

            std::vector<const std::vector<std::uint32_t>*> batch_active(
                batch_ids.size());
            Eigen::VectorXd y(batch);
            for (Eigen::Index b = 0; b < batch; ++b) {
                const std::size_t id = batch_ids[static_cast<std::size_t>(b)];
                batch_active[static_cast<std::size_t>(b)] = &active[id];
                y(b) = data.labels[id];
            }

            forward_sparse(model, batch_active, true, &rng, cache);
            std::vector<Eigen::MatrixXd> blocks;
            if (constrained) blocks = heuristic_features(data, batch_ids);
            LossResult loss = custom_loss(cache.yhat, y, blocks, spec.weighting);
            if (!std::isfinite(loss.value)) {
                throw DivergenceError("train_mlp: non-finite loss at epoch " +
                                      std::to_string(epoch));
            }
            loss_sum += loss.value * static_cast<double>(batch);

            RowMat dpre1 = backward_tail(model, cache, loss.grad, true, grads);
            for (Eigen::Index b = 0; b < batch; ++b) {
                for (std::uint32_t j : *batch_active[static_cast<std::size_t>(b)]) {
                    touched.push_back(j);
                    grads.w1.row(j) += dpre1.row(b);
                }
            }

            ++step;
            const double c1 = 1.0 / (1.0 - std::pow(kBeta1, static_cast<double>(step)));
            const double c2 = 1.0 / (1.0 - std::pow(kBeta2, static_cast<double>(step)));

            // Input layer: rows with gradient get the full step, the rest
            // take the zero-gradient step (moment decay plus weight decay).
            std::sort(touched.begin(), touched.end());
            touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
            std::size_t t_idx = 0;
            for (Eigen::Index r = 0; r < width; ++r) {
                if (t_idx < touched.size() &&
                    touched[t_idx] == static_cast<std::uint32_t>(r)) {
                    adamw_update(model.w1.row(r).data(), grads.w1.row(r).data(),
                                 moments.m_w1.row(r).data(), moments.v_w1.row(r).data(),
                                 hidden, lr, wd, c1, c2);
                    grads.w1.row(r).setZero();
                    ++t_idx;
                } else {
                    adamw_update_zero(model.w1.row(r).data(), moments.m_w1.row(r).data(),
                                      moments.v_w1.row(r).data(), hidden, lr, wd, c1,
                                      c2);
                }
            }
            touched.clear();

            adamw_update(model.w2.data(), grads.w2.data(), moments.m_w2.data(),
                         moments.v_w2.data(), model.w2.size(), lr, wd, c1, c2);
            adamw_update(model.w3.data(), grads.w3.data(), moments.m_w3.data(),
                         moments.v_w3.data(), model.w3.size(), lr, wd, c1, c2);
            adamw_update(model.b1.data(), grads.b1.data(), moments.m_b1.data(),
                         moments.v_b1.data(), model.b1.size(), lr, 0.0, c1, c2);
            adamw_update(model.b2.data(), grads.b2.data(), moments.m_b2.data(),
                         moments.v_b2.data(), model.b2.size(), lr, 0.0, c1, c2);
            adamw_update(&model.b3, &grads.b3, &moments.m_b3, &moments.v_b3, 1, lr, 0.0,
                         c1, c2);
        }

        EpochRecord record;
        record.train_loss = loss_sum / static_cast<double>(order.size());
        Eigen::VectorXd val_pred = predict(model, data, val_ids);
        Eigen::VectorXd val_true(static_cast<Eigen::Index>(val_ids.size()));
        for (std::size_t i = 0; i < val_ids.size(); ++i) {
            val_true(static_cast<Eigen::Index>(i)) = data.labels[val_ids[i]];
        }
        record.val_mae = mae(val_true, val_pred);
        log.epochs.push_back(record);

        if (record.val_mae < best_val) {
            best_val = record.val_mae;
            log.best_epoch = log.epochs.size() - 1;
            result.model = model;
            epochs_since_best = 0;
        } else if (++epochs_since_best >= spec.patience) {
            break;
        }
    }
    log.best_val_mae = best_val;
    return result;
}

TrainResult train_mlp(const EncodedDataset& train, const EncodedDataset& val,
                      const TrainSpec& spec) {
    if (train.width() != val.width()) {
        throw DimensionError("train_mlp: train/validation width mismatch");
    }
    // Merge into one view: rows 0..n_train-1 are training, the rest validation.
    EncodedDataset merged = train;
    merged.rows.insert(merged.rows.end(), val.rows.begin(), val.rows.end());
    merged.labels.insert(merged.labels.end(), val.labels.begin(), val.labels.end());
    std::vector<std::size_t> train_ids(train.rows.size());
    std::iota(train_ids.begin(), train_ids.end(), 0);
    std::vector<std::size_t> val_ids(val.rows.size());
    std::iota(val_ids.begin(), val_ids.end(), train.rows.size());
    return train_mlp(merged, train_ids, val_ids, spec);
}

Eigen::VectorXd predict(const MlpModel& model, const EncodedDataset& data,
                        std::span<const std::size_t> rows) {
    if (static_cast<Eigen::Index>(data.width()) != model.input_width()) {
        throw DimensionError("predict: encoded width mismatch");
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::VectorXd out(n);
    const Eigen::Index hidden = model.hidden_size();
    Eigen::RowVectorXd pre1(hidden);
    for (Eigen::Index i = 0; i < n; ++i) {
        const FeatureVector& row = data.rows[rows[static_cast<std::size_t>(i)]];
        pre1 = model.b1.transpose();
        for (std::uint32_t j : row.kb_bits_on) pre1 += model.w1.row(j);
        for (std::uint32_t j : data.flag_columns_on(row)) pre1 += model.w1.row(j);
        Eigen::RowVectorXd h1 = pre1.array().tanh();
        Eigen::RowVectorXd h2 =
            ((h1 * model.w2) + model.b2.transpose()).array().tanh();
        out(i) = h2.dot(model.w3) + model.b3;
    }
    return out;
}

Eigen::VectorXd predict(const MlpModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != model.input_width()) {
        throw DimensionError("predict: width mismatch");
    }
    BatchCache c;
    forward_dense(model, x, false, nullptr, c);
    return c.yhat;
}

} // namespace incmeter
