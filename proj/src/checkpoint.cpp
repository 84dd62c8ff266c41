#include "nsc/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <json.hpp>

namespace nsc {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'N', 'S', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

json net_to_json(const NetworkConfig& c) {
    return json{{"hidden_layers", c.hidden_layers},
                {"hidden_width", c.hidden_width},
                {"latent_dim", c.latent_dim},
                {"activation", c.activation == Activation::sine ? "sine" : "relu"},
                {"omega", c.omega},
                {"latent_injection_layers", c.latent_injection_layers},
                {"coords_to_all_layers", c.coords_to_all_layers},
                {"clamp_output", c.clamp_output},
                {"clamp_value", c.clamp_value}};
}

NetworkConfig net_from_json(const json& j) {
    NetworkConfig c;
    c.hidden_layers = j.at("hidden_layers").get<int>();
    c.hidden_width = j.at("hidden_width").get<int>();
    c.latent_dim = j.at("latent_dim").get<int>();
    c.activation = j.at("activation").get<std::string>() == "relu" ? Activation::relu
                                                                   : Activation::sine;
    c.omega = j.at("omega").get<double>();
    c.latent_injection_layers = j.at("latent_injection_layers").get<std::vector<int>>();
    c.coords_to_all_layers = j.at("coords_to_all_layers").get<bool>();
    c.clamp_output = j.value("clamp_output", false);
    c.clamp_value = j.value("clamp_value", 0.1);
    return c;
}

void write_doubles(std::ofstream& out, const double* data, std::size_t n) {
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::ifstream& in, double* data, std::size_t n) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    const auto& p = ckpt.params;
    json header{{"version", kVersion},
                {"network", net_to_json(ckpt.net)},
                {"loss", {{"sigma", ckpt.loss.sigma}}},
                {"epoch", ckpt.epoch},
                {"final_loss", ckpt.final_loss},
                {"num_sequences", p.num_sequences()},
                {"dtype", "f64"}};
    if (ckpt.has_optimizer)
        header["optimizer"] = json{{"step", ckpt.adam.step}, {"z_steps", ckpt.adam.z_steps}};
    const std::string hdr = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(kMagic, 4);
    std::uint32_t version = kVersion;
    std::uint64_t hdr_len = hdr.size();
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&hdr_len), sizeof hdr_len);
    out.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));

    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        // Row-major on disk regardless of Eigen's storage order.
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = p.weights[l];
        write_doubles(out, w.data(), static_cast<std::size_t>(w.size()));
        write_doubles(out, p.biases[l].data(), static_cast<std::size_t>(p.biases[l].size()));
    }
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> z = p.latent_codes;
    write_doubles(out, z.data(), static_cast<std::size_t>(z.size()));
    if (ckpt.has_optimizer) {
        const auto& a = ckpt.adam;
        for (std::size_t l = 0; l < p.weights.size(); ++l) {
            for (const Mat<double>* t : {&a.m_w[l], &a.v_w[l]}) {
                Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = *t;
                write_doubles(out, w.data(), static_cast<std::size_t>(w.size()));
            }
            write_doubles(out, a.m_b[l].data(), static_cast<std::size_t>(a.m_b[l].size()));
            write_doubles(out, a.v_b[l].data(), static_cast<std::size_t>(a.v_b[l].size()));
        }
        for (const Mat<double>* t : {&a.m_z, &a.v_z}) {
            Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = *t;
            write_doubles(out, w.data(), static_cast<std::size_t>(w.size()));
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t hdr_len = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&hdr_len), sizeof hdr_len);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("not a checkpoint file: " + path);
    if (version != kVersion) throw IoError("unsupported checkpoint version in " + path);
    std::string hdr(hdr_len, '\0');
    in.read(hdr.data(), static_cast<std::streamsize>(hdr_len));
    json header = json::parse(hdr, nullptr, false);
    if (header.is_discarded()) throw IoError("corrupt checkpoint header in " + path);

    Checkpoint ckpt;
    ckpt.net = net_from_json(header.at("network"));
    ckpt.loss.sigma = header.at("loss").at("sigma").get<double>();
    ckpt.epoch = header.at("epoch").get<int>();
    ckpt.final_loss = header.at("final_loss").get<double>();
    const int n_seq = header.at("num_sequences").get<int>();

    auto& p = ckpt.params;
    for (int l = 1; l <= ckpt.net.hidden_layers + 1; ++l) {
        const int rows = ckpt.net.output_width(l);
        const int cols = ckpt.net.input_width(l);
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w(rows, cols);
        read_doubles(in, w.data(), static_cast<std::size_t>(w.size()));
        p.weights.emplace_back(w);
        Vec<double> b(rows);
        read_doubles(in, b.data(), static_cast<std::size_t>(b.size()));
        p.biases.push_back(std::move(b));
    }
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> z(n_seq,
                                                                             ckpt.net.latent_dim);
    read_doubles(in, z.data(), static_cast<std::size_t>(z.size()));
    p.latent_codes = z;
    if (header.contains("optimizer")) {
        ckpt.has_optimizer = true;
        auto& a = ckpt.adam;
        a.step = header.at("optimizer").at("step").get<std::int64_t>();
        a.z_steps = header.at("optimizer").at("z_steps").get<std::vector<std::int64_t>>();
        if (a.z_steps.size() != static_cast<std::size_t>(n_seq))
            throw IoError("checkpoint optimizer state is inconsistent: " + path);
        for (std::size_t l = 0; l < p.weights.size(); ++l) {
            const auto rows = p.weights[l].rows(), cols = p.weights[l].cols();
            for (std::vector<Mat<double>>* dst : {&a.m_w, &a.v_w}) {
                Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w(rows,
                                                                                         cols);
                read_doubles(in, w.data(), static_cast<std::size_t>(w.size()));
                dst->emplace_back(w);
            }
            Vec<double> mb(rows), vb(rows);
            read_doubles(in, mb.data(), static_cast<std::size_t>(mb.size()));
            read_doubles(in, vb.data(), static_cast<std::size_t>(vb.size()));
            a.m_b.push_back(std::move(mb));
            a.v_b.push_back(std::move(vb));
        }
        for (Mat<double>* dst : {&a.m_z, &a.v_z}) {
            Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w(
                n_seq, ckpt.net.latent_dim);
            read_doubles(in, w.data(), static_cast<std::size_t>(w.size()));
            *dst = w;
        }
    }
    if (!in) throw IoError("truncated checkpoint: " + path);
    return ckpt;
}

}  // namespace nsc
