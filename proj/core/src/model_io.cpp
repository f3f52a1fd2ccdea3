#include "incmeter/model_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace incmeter {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = arr[static_cast<std::size_t>(i)].get<double>();
    }
    return v;
}

template <typename Mat>
json matrix_to_json(const Mat& m) { // flattened row-major
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
    }
    return arr;
}

template <typename Mat>
void matrix_from_json(const json& arr, Eigen::Index rows, Eigen::Index cols, Mat& m) {
    if (static_cast<Eigen::Index>(arr.size()) != rows * cols) {
        throw std::runtime_error("model file: parameter array has wrong length");
    }
    m.resize(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = arr[k++].get<double>();
    }
}

std::string fingerprint_hex(std::uint64_t fp) {
    std::ostringstream out;
    out << std::hex << fp;
    return out.str();
}

const char* kind_name(LinearKind kind) {
    switch (kind) {
    case LinearKind::Ols: return "ols";
    case LinearKind::Ridge: return "ridge";
    default: return "lasso";
    }
}

} // namespace

void save_model(const ModelCheckpoint& checkpoint, const std::string& path) {
    ordered_json doc;
    doc["target"] = checkpoint.target == Measure::MI ? "mi" : "at";
    doc["encoding_fingerprint"] = fingerprint_hex(checkpoint.encoding_fingerprint);

    if (const auto* linear = std::get_if<LinearModel>(&checkpoint.model)) {
        doc["kind"] = kind_name(linear->kind);
        doc["coefficients"] = vector_to_json(linear->coefficients);
        doc["intercept"] = linear->intercept;
        if (linear->alpha) doc["alpha"] = *linear->alpha;
        doc["rank_deficient"] = linear->rank_deficient;
    } else {
        const auto& mlp = std::get<MlpModel>(checkpoint.model);
        doc["kind"] = "mlp";
        doc["input_width"] = mlp.input_width();
        doc["hidden_size"] = mlp.hidden_size();
        doc["dropout_rate"] = mlp.dropout_rate;
        doc["w1"] = matrix_to_json(mlp.w1);
        doc["b1"] = vector_to_json(mlp.b1);
        doc["w2"] = matrix_to_json(mlp.w2);
        doc["b2"] = vector_to_json(mlp.b2);
        doc["w3"] = vector_to_json(mlp.w3);
        doc["b3"] = mlp.b3;
        const TrainSpec& spec = checkpoint.train_spec;
        doc["train_spec"] = {
            {"loss", spec.loss == LossMode::L1 ? "l1" : "l1_plus_constraints"},
            {"weighting",
             spec.weighting == ConstraintWeighting::BatchMean ? "batch_mean"
                                                              : "per_instance"},
            {"learning_rate", spec.learning_rate},
            {"weight_decay", spec.weight_decay},
            {"hidden_size", spec.hidden_size},
            {"max_epochs", spec.max_epochs},
            {"patience", spec.patience},
            {"batch_size", spec.batch_size},
            {"seed", spec.seed},
        };
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << doc.dump(2) << '\n';
}

ModelCheckpoint load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw std::runtime_error(path + ": not valid JSON");

    ModelCheckpoint checkpoint;
    checkpoint.target = doc.at("target").get<std::string>() == "mi" ? Measure::MI
                                                                    : Measure::AT;
    checkpoint.encoding_fingerprint =
        std::stoull(doc.at("encoding_fingerprint").get<std::string>(), nullptr, 16);

    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "mlp") {
        MlpModel mlp;
        const auto input = doc.at("input_width").get<Eigen::Index>();
        const auto hidden = doc.at("hidden_size").get<Eigen::Index>();
        mlp.dropout_rate = doc.at("dropout_rate").get<double>();
        matrix_from_json(doc.at("w1"), input, hidden, mlp.w1);
        mlp.b1 = vector_from_json(doc.at("b1"));
        matrix_from_json(doc.at("w2"), hidden, hidden, mlp.w2);
        mlp.b2 = vector_from_json(doc.at("b2"));
        mlp.w3 = vector_from_json(doc.at("w3"));
        mlp.b3 = doc.at("b3").get<double>();
        const json& spec = doc.at("train_spec");
        TrainSpec& ts = checkpoint.train_spec;
        ts.loss = spec.at("loss").get<std::string>() == "l1" ? LossMode::L1
                                                             : LossMode::L1PlusConstraints;
        ts.weighting = spec.at("weighting").get<std::string>() == "batch_mean"
                           ? ConstraintWeighting::BatchMean
                           : ConstraintWeighting::PerInstance;
        ts.learning_rate = spec.at("learning_rate").get<double>();
        ts.weight_decay = spec.at("weight_decay").get<double>();
        ts.hidden_size = spec.at("hidden_size").get<int>();
        ts.max_epochs = spec.at("max_epochs").get<int>();
        ts.patience = spec.at("patience").get<int>();
        ts.batch_size = spec.at("batch_size").get<int>();
        ts.seed = spec.at("seed").get<std::uint64_t>();
        checkpoint.model = std::move(mlp);
    } else {
        LinearModel linear;
        linear.kind = kind == "ols" ? LinearKind::Ols
                                    : (kind == "ridge" ? LinearKind::Ridge
                                                       : LinearKind::Lasso);
        linear.coefficients = vector_from_json(doc.at("coefficients"));
        linear.intercept = doc.at("intercept").get<double>();
        if (doc.contains("alpha")) linear.alpha = doc.at("alpha").get<double>();
        linear.rank_deficient = doc.value("rank_deficient", false);
        checkpoint.model = std::move(linear);
    }
    return checkpoint;
}

} // namespace incmeter
