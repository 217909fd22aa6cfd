#include "lzsim/model_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lzsim {

namespace {

using nlohmann::json;

Eigen::MatrixXd parse_real_matrix(const json& j, const std::string& key) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw std::invalid_argument(key + ": expected an array of rows");
    }
    const auto rows = j.size();
    const auto cols = j[0].size();
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) {
            throw std::invalid_argument(key + ": ragged rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                j[r][c].get<double>();
        }
    }
    return m;
}

RealVector parse_real_vector(const json& j, const std::string& key) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument(key + ": expected a non-empty array");
    }
    RealVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

Matrix parse_hermitian(const json& j) {
    Eigen::MatrixXd re, im;
    if (j.is_object()) {
        if (!j.contains("re")) {
            throw std::invalid_argument("A: object form needs \"re\"");
        }
        re = parse_real_matrix(j.at("re"), "A.re");
        im = j.contains("im") ? parse_real_matrix(j.at("im"), "A.im")
                              : Eigen::MatrixXd::Zero(re.rows(), re.cols());
        if (im.rows() != re.rows() || im.cols() != re.cols()) {
            throw std::invalid_argument("A: re/im shape mismatch");
        }
    } else {
        re = parse_real_matrix(j, "A");
        im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
    }
    return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    json j;
    in >> j;
    return j;
}

std::vector<double> parse_grid_value(const json& j, const std::string& key) {
    if (j.is_string()) {
        return parse_grid(j.get<std::string>());
    }
    if (j.is_array()) {
        std::vector<double> grid;
        grid.reserve(j.size());
        for (const auto& v : j) grid.push_back(v.get<double>());
        return grid;
    }
    throw std::invalid_argument(key + ": expected array or grid string");
}

CustomModelInput parse_custom_model_json(const json& j) {
    if (!j.contains("A") || !j.contains("B")) {
        throw std::invalid_argument("custom model: keys \"A\" and \"B\" required");
    }
    const Matrix a = parse_hermitian(j.at("A"));
    const RealVector b = parse_real_vector(j.at("B"), "B");

    // Route through the model constructor for Hermiticity/shape validation.
    Eigen::MatrixXd b_mat = Eigen::MatrixXd::Zero(b.size(), b.size());
    b_mat.diagonal() = b;
    const ModelSpec validated = build_custom_model(a, b_mat.cast<Complex>());

    CustomModelInput input;
    input.A = validated.A;
    input.b_pattern = validated.b_diag;
    if (j.contains("C")) {
        input.c_diagonal = parse_real_vector(j.at("C"), "C");
        if (input.c_diagonal.size() != input.b_pattern.size()) {
            throw std::invalid_argument("custom model: C dimension mismatch");
        }
    } else {
        input.c_diagonal = RealVector::Zero(input.b_pattern.size());
    }
    if (j.contains("omega")) input.omega = j.at("omega").get<double>();
    if (j.contains("n_fock")) input.n_fock = j.at("n_fock").get<int>();
    return input;
}

SweepConfig parse_sweep_config_json(const json& j) {
    SweepConfig config;
    if (j.contains("model")) {
        config.model_kind = model_kind_from_string(j.at("model").get<std::string>());
    }
    if (j.contains("custom_file")) {
        config.custom = load_custom_model_file(j.at("custom_file").get<std::string>());
        config.model_kind = ModelKind::Custom;
    }
    if (j.contains("couplings")) {
        for (const auto& c : j.at("couplings")) {
            config.couplings.push_back(
                coupling_kind_from_string(c.get<std::string>()));
        }
    }
    if (j.contains("delta_grid")) {
        config.delta_grid = parse_grid_value(j.at("delta_grid"), "delta_grid");
    }
    if (j.contains("g_grid")) {
        config.g_grid = parse_grid_value(j.at("g_grid"), "g_grid");
    }
    if (j.contains("omega")) config.omega_over_delta = j.at("omega").get<double>();
    if (j.contains("n_fock")) config.n_fock = j.at("n_fock").get<int>();
    if (j.contains("rel_tol")) config.rel_tol = j.at("rel_tol").get<double>();
    if (j.contains("vt_extent")) config.vt_extent = j.at("vt_extent").get<double>();
    if (j.contains("leak_threshold")) {
        config.leak_threshold = j.at("leak_threshold").get<double>();
    }
    if (j.contains("workers")) config.workers = j.at("workers").get<int>();
    if (j.contains("out")) config.output_path = j.at("out").get<std::string>();
    return config;
}

}  // namespace

CustomModelInput load_custom_model_file(const std::string& path) {
    return parse_custom_model_json(load_json(path));
}

CustomModelInput parse_custom_model(const std::string& json_text) {
    return parse_custom_model_json(json::parse(json_text));
}

SweepConfig load_sweep_config(const std::string& path) {
    return parse_sweep_config_json(load_json(path));
}

SweepConfig parse_sweep_config(const std::string& json_text) {
    return parse_sweep_config_json(json::parse(json_text));
}

}  // namespace lzsim
