// nsc: neural shape-sequence pipeline driver.
//
// Every subcommand reads one JSON config (sections mirror the library
// configs), applies --set dotted-path overrides, and records a manifest with
// content digests of everything it read and wrote. All randomness descends
// from the root seed via the documented counter scheme, so reruns with the
// same config, seed, and thread count are byte-identical (manifests aside,
// which carry wall-clock timings).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsc/checkpoint.hpp"
#include "nsc/edt.hpp"
#include "nsc/generate.hpp"
#include "nsc/gridio.hpp"
#include "nsc/manifest.hpp"
#include "nsc/mesh.hpp"
#include "nsc/metrics.hpp"
#include "nsc/synthetic.hpp"
#include "nsc/threads.hpp"
#include "nsc/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nsc;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

json load_config(const std::string& path, const std::vector<std::string>& overrides) {
    json cfg = json::object();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config: " + path);
        cfg = json::parse(in, nullptr, false);
        if (cfg.is_discarded()) throw ValidationError("config is not valid JSON: " + path);
    }
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ValidationError("--set expects key.path=value, got: " + ov);
        std::string keypath = ov.substr(0, eq), value = ov.substr(eq + 1);
        json* node = &cfg;
        std::size_t pos = 0;
        while (true) {
            auto dot = keypath.find('.', pos);
            std::string key = keypath.substr(pos, dot - pos);
            if (key.empty()) throw ValidationError("--set has an empty key segment: " + ov);
            if (dot == std::string::npos) {
                json parsed = json::parse(value, nullptr, false);
                (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
                break;
            }
            node = &(*node)[key];
            pos = dot + 1;
        }
    }
    return cfg;
}

std::array<int, 3> dims_from(const json& j, const char* key,
                             std::array<int, 3> fallback = {64, 64, 64}) {
    if (!j.contains(key)) return fallback;
    auto v = j.at(key).get<std::vector<int>>();
    if (v.size() == 1) return {v[0], v[0], v[0]};
    if (v.size() != 3) throw ValidationError(std::string(key) + " must have 1 or 3 entries");
    return {v[0], v[1], v[2]};
}

NetworkConfig network_from(const json& cfg) {
    NetworkConfig c;
    const json& j = cfg.value("network", json::object());
    c.hidden_layers = j.value("hidden_layers", c.hidden_layers);
    c.hidden_width = j.value("hidden_width", c.hidden_width);
    c.latent_dim = j.value("latent_dim", c.latent_dim);
    if (j.contains("activation")) {
        const std::string a = j.at("activation").get<std::string>();
        if (a != "sine" && a != "relu")
            throw ValidationError("network.activation must be sine or relu");
        c.activation = a == "relu" ? Activation::relu : Activation::sine;
    }
    c.omega = j.value("omega", c.omega);
    if (j.contains("latent_injection_layers"))
        c.latent_injection_layers = j.at("latent_injection_layers").get<std::vector<int>>();
    c.coords_to_all_layers = j.value("coords_to_all_layers", c.coords_to_all_layers);
    c.clamp_output = j.value("clamp_output", c.clamp_output);
    c.clamp_value = j.value("clamp_value", c.clamp_value);
    c.validate();
    return c;
}

LossConfig loss_from(const json& cfg) {
    LossConfig c;
    c.sigma = cfg.value("loss", json::object()).value("sigma", c.sigma);
    c.validate();
    return c;
}

TrainConfig train_from(const json& cfg, std::uint64_t root_seed) {
    TrainConfig c;
    const json& j = cfg.value("train", json::object());
    c.epochs = j.value("epochs", c.epochs);
    c.lr = j.value("lr", c.lr);
    c.lr_decay_factor = j.value("lr_decay_factor", c.lr_decay_factor);
    c.lr_decay_every = j.value("lr_decay_every", c.lr_decay_every);
    c.batch_points = j.value("batch_points", c.batch_points);
    c.batches_per_sequence = j.value("batches_per_sequence", c.batches_per_sequence);
    c.sequences_per_epoch = j.value("sequences_per_epoch", c.sequences_per_epoch);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.eps = j.value("eps", c.eps);
    c.use_f32 = j.value("use_f32", c.use_f32);
    c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
    c.seed = root_seed;
    c.validate();
    return c;
}

SequenceSpec spec_from(const json& j, std::uint64_t fallback_seed) {
    SequenceSpec s;
    s.kind = sequence_kind_from_string(j.value("kind", "growth"));
    s.frames = j.value("frames", s.frames);
    s.initial_radius = j.value("initial_radius", s.initial_radius);
    s.growth_rate = j.value("growth_rate", s.growth_rate);
    s.separation_rate = j.value("separation_rate", s.separation_rate);
    s.protrusion_count = j.value("protrusion_count", s.protrusion_count);
    s.protrusion_length = j.value("protrusion_length", s.protrusion_length);
    s.protrusion_width = j.value("protrusion_width", s.protrusion_width);
    s.smoothing = j.value("smoothing", s.smoothing);
    s.rng_seed = j.value("rng_seed", fallback_seed);
    s.validate();
    return s;
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& ext) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string out_dir_of(const json& cfg, const std::string& flag_out) {
    std::string dir = !flag_out.empty() ? flag_out : cfg.value("output_dir", std::string("out"));
    fs::create_directories(dir);
    return dir;
}

void log_line(const std::string& msg) { std::printf("[nsc] %s\n", msg.c_str()); }

// ---------------------------------------------------------------- prepare

int cmd_prepare(const json& cfg, const std::string& flag_out) {
    const std::uint64_t seed = cfg.value("seed", 0ULL);
    const json& ds = cfg.value("dataset", json::object());
    const std::string source = ds.value("source", std::string("synthetic"));
    const auto dims = dims_from(ds, "dims");
    const int frames = ds.value("frames", 10);
    const std::int64_t count = ds.value("samples_per_sequence", std::int64_t{20000});
    const double near_fraction = ds.value("near_fraction", 0.7);
    const double band = ds.value("band", 0.03);
    const std::string out_dir = out_dir_of(cfg, flag_out);

    RunManifest manifest("prepare", cfg.dump(2), seed);
    Timer timer;
    std::vector<SdfSampleSet> sets;

    if (source == "synthetic") {
        if (!ds.contains("sequences") || !ds.at("sequences").is_array() ||
            ds.at("sequences").empty())
            throw ValidationError("dataset.sequences must be a non-empty array");
        std::vector<SequenceSpec> specs;
        std::uint64_t k = 0;
        for (const auto& sj : ds.at("sequences")) specs.push_back(spec_from(sj, k++));
        sets = build_dataset(specs, dims, frames, count, near_fraction, band, seed);
    } else if (source == "masks") {
        // One subdirectory per sequence; each holds u8 occupancy grid files,
        // one per frame, ordered by filename.
        const fs::path root = ds.at("mask_dir").get<std::string>();
        std::vector<fs::path> seq_dirs;
        for (const auto& e : fs::directory_iterator(root))
            if (e.is_directory()) seq_dirs.push_back(e.path());
        std::sort(seq_dirs.begin(), seq_dirs.end());
        if (seq_dirs.empty()) throw ValidationError("mask_dir has no sequence directories");
        std::uint32_t id = 0;
        for (const auto& sd : seq_dirs) {
            auto files = sorted_files(sd, ".json");
            if (files.empty())
                throw ValidationError("no mask frames in " + sd.string());
            std::vector<VoxelGrid> sdf_frames;
            for (const auto& f : files) {
                manifest.add_input(f.string());
                VoxelGrid mask = load_grid(f.string());
                if (!sdf_frames.empty() && mask.dims != sdf_frames.front().dims)
                    throw ValidationError("mask frames disagree on dims in " + sd.string() +
                                          " at " + f.filename().string());
                VoxelGrid sdf = signed_distance_transform(mask);
                sdf.time_index = static_cast<int>(sdf_frames.size());
                sdf_frames.push_back(std::move(sdf));
            }
            sets.push_back(sample_sdf_points(sdf_frames, count, near_fraction, band,
                                             derive_seed(seed, id), id));
            ++id;
        }
    } else {
        throw ValidationError("dataset.source must be synthetic or masks");
    }

    for (const auto& set : sets) {
        char name[32];
        std::snprintf(name, sizeof name, "seq_%03u.sdf4", set.sequence_id);
        const std::string path = (fs::path(out_dir) / name).string();
        save_sample_set(set, path);
        manifest.add_output(path);
        if (set.uniform_fallback)
            log_line("warning: sequence " + std::to_string(set.sequence_id) +
                     " fell back to uniform sampling (near band unreachable)");
    }
    manifest.add_timing("total", timer.seconds());
    manifest.write((fs::path(out_dir) / "prepare.manifest.json").string());
    log_line("prepared " + std::to_string(sets.size()) + " sample sets in " + out_dir);
    return 0;
}

// ------------------------------------------------------------------ train

std::vector<SdfSampleSet> load_dataset(const json& cfg, const std::string& out_dir,
                                       RunManifest& manifest) {
    const std::string data_dir = cfg.value("data_dir", out_dir);
    auto files = sorted_files(data_dir, ".sdf4");
    if (files.empty()) throw ValidationError("no .sdf4 sample sets in " + data_dir);
    std::vector<SdfSampleSet> sets;
    for (const auto& f : files) {
        manifest.add_input(f.string());
        sets.push_back(load_sample_set(f.string()));
    }
    std::sort(sets.begin(), sets.end(),
              [](const auto& a, const auto& b) { return a.sequence_id < b.sequence_id; });
    for (std::size_t i = 0; i < sets.size(); ++i)
        if (sets[i].sequence_id != i)
            throw ValidationError("dataset sequence ids must be consecutive from 0");
    return sets;
}

int cmd_train(const json& cfg, const std::string& flag_out) {
    const std::uint64_t seed = cfg.value("seed", 0ULL);
    const std::string out_dir = out_dir_of(cfg, flag_out);
    RunManifest manifest("train", cfg.dump(2), seed);
    Timer timer;

    auto dataset = load_dataset(cfg, out_dir, manifest);
    NetworkConfig net = network_from(cfg);
    LossConfig loss = loss_from(cfg);
    TrainConfig tc = train_from(cfg, seed);

    AutoDecoderParams<double> init_p;
    AdamState<double> init_a;
    const AutoDecoderParams<double>* initial = nullptr;
    const AdamState<double>* initial_adam = nullptr;
    const std::string resume = cfg.value("train", json::object()).value("resume", std::string());
    if (!resume.empty()) {
        manifest.add_input(resume);
        Checkpoint ckpt = load_checkpoint(resume);
        if (!ckpt.has_optimizer)
            throw ValidationError("resume checkpoint lacks optimizer state: " + resume);
        net = ckpt.net;
        loss = ckpt.loss;
        tc.start_epoch = ckpt.epoch;
        init_p = std::move(ckpt.params);
        init_a = std::move(ckpt.adam);
        initial = &init_p;
        initial_adam = &init_a;
        log_line("resuming from " + resume + " at epoch " + std::to_string(tc.start_epoch));
    }

    std::vector<std::string> ckpt_files;
    auto sink = [&](int epoch, const AutoDecoderParams<double>& p, const AdamState<double>& a,
                    const std::vector<EpochStats>& hist) {
        char name[48];
        std::snprintf(name, sizeof name, "checkpoint_%05d.nsck", epoch + 1);
        const std::string path = (fs::path(out_dir) / name).string();
        save_checkpoint({net, loss, epoch + 1, hist.back().mean_loss, p, true, a}, path);
        ckpt_files.push_back(path);
        log_line("epoch " + std::to_string(epoch + 1) + ": mean loss " +
                 std::to_string(hist.back().mean_loss));
    };

    TrainResult result = train(dataset, net, loss, tc, sink, initial, initial_adam);

    const double final_loss = result.history.empty() ? 0.0 : result.history.back().mean_loss;
    const std::string model_path = (fs::path(out_dir) / "model.nsck").string();
    save_checkpoint({net, loss, tc.epochs, final_loss, result.params, false, {}}, model_path);
    const std::string csv_path = (fs::path(out_dir) / "loss.csv").string();
    write_loss_history_csv(result.history, csv_path);
    for (const auto& f : ckpt_files) manifest.add_output(f);
    manifest.add_output(model_path);
    manifest.add_output(csv_path);
    manifest.add_timing("total", timer.seconds());
    manifest.write((fs::path(out_dir) / "train.manifest.json").string());
    log_line("trained " + std::to_string(tc.epochs) + " epochs; final mean loss " +
             std::to_string(final_loss));
    return 0;
}

// ------------------------------------------------- generate / reconstruct

void write_frames(const std::vector<VoxelGrid>& frames, const fs::path& dir,
                  const std::string& dtype, bool meshes, double iso, RunManifest& manifest) {
    fs::create_directories(dir);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%03zu.json", f);
        const std::string path = (dir / name).string();
        save_grid(frames[f], path, dtype);
        manifest.add_output(path);
        fs::path raw = dir / name;
        raw.replace_extension(".raw");
        manifest.add_output(raw.string());
        if (meshes) {
            TriangleMesh mesh = marching_cubes(frames[f], iso);
            mesh.frame = static_cast<int>(f);
            char oname[32];
            std::snprintf(oname, sizeof oname, "frame_%03zu.obj", f);
            const std::string opath = (dir / oname).string();
            export_obj(mesh, opath);
            manifest.add_output(opath);
        }
    }
}

Checkpoint load_model(const json& section, RunManifest& manifest) {
    if (!section.contains("checkpoint"))
        throw ValidationError("config needs a checkpoint path");
    const std::string path = section.at("checkpoint").get<std::string>();
    manifest.add_input(path);
    return load_checkpoint(path);
}

int cmd_generate(const json& cfg, const std::string& flag_out) {
    const std::uint64_t seed = cfg.value("seed", 0ULL);
    const std::string out_dir = out_dir_of(cfg, flag_out);
    RunManifest manifest("generate", cfg.dump(2), seed);
    Timer timer;

    const json& g = cfg.value("generate", json::object());
    Checkpoint ckpt = load_model(g, manifest);
    const int count = g.value("count", 1);
    if (count < 1) throw ValidationError("generate.count must be >= 1");
    const std::string mode = g.value("mode", std::string("sample"));
    const double stddev = g.value("latent_stddev", mode == "perturb" ? 0.01 : 0.1);
    const auto dims = dims_from(g, "dims");
    const int frames = g.value("frames", 10);
    const bool meshes = g.value("meshes", false);

    for (int i = 0; i < count; ++i) {
        Vec<double> z;
        if (mode == "sample") {
            z = sample_latent(ckpt.net.latent_dim, stddev, derive_seed(seed, i));
        } else if (mode == "perturb") {
            const int base = g.value("base_sequence", i % ckpt.params.num_sequences());
            if (base < 0 || base >= ckpt.params.num_sequences())
                throw ValidationError("generate.base_sequence out of range (known ids: 0.." +
                                      std::to_string(ckpt.params.num_sequences() - 1) + ")");
            // Round-robin the training codes when no base is pinned.
            const int row = g.contains("base_sequence") ? base
                                                        : i % ckpt.params.num_sequences();
            z = perturb_latent(ckpt.params.latent_codes.row(row).transpose(), stddev,
                               derive_seed(seed, i));
        } else {
            throw ValidationError("generate.mode must be sample or perturb");
        }
        char dname[16];
        std::snprintf(dname, sizeof dname, "gen_%03d", i);
        auto frames_out = generate_sequence(ckpt.params, ckpt.net, z, dims, frames);
        write_frames(frames_out, fs::path(out_dir) / dname, "f32", meshes, 0.0, manifest);
    }
    manifest.add_timing("total", timer.seconds());
    manifest.write((fs::path(out_dir) / "generate.manifest.json").string());
    log_line("generated " + std::to_string(count) + " sequences in " + out_dir);
    return 0;
}

int cmd_reconstruct(const json& cfg, const std::string& flag_out) {
    const std::uint64_t seed = cfg.value("seed", 0ULL);
    const std::string out_dir = out_dir_of(cfg, flag_out);
    RunManifest manifest("reconstruct", cfg.dump(2), seed);
    Timer timer;

    const json& r = cfg.value("reconstruct", json::object());
    Checkpoint ckpt = load_model(r, manifest);
    const int id = r.value("sequence_id", 0);
    if (id < 0 || id >= ckpt.params.num_sequences())
        throw ValidationError("reconstruct: unknown sequence id " + std::to_string(id) +
                              " (known ids: 0.." +
                              std::to_string(ckpt.params.num_sequences() - 1) + ")");
    const auto dims = dims_from(r, "dims");
    const int frames = r.value("frames", 10);
    const bool meshes = r.value("meshes", false);

    Vec<double> z = ckpt.params.latent_codes.row(id).transpose();
    auto out = generate_sequence(ckpt.params, ckpt.net, z, dims, frames);
    char dname[24];
    std::snprintf(dname, sizeof dname, "recon_seq%03d", id);
    write_frames(out, fs::path(out_dir) / dname, "f32", meshes, 0.0, manifest);
    manifest.add_timing("total", timer.seconds());
    manifest.write((fs::path(out_dir) / "reconstruct.manifest.json").string());
    log_line("reconstructed sequence " + std::to_string(id) + " (" +
             std::to_string(frames) + " frames)");
    return 0;
}

int cmd_interpolate(const json& cfg, const std::string& flag_out) {
    const std::uint64_t seed = cfg.value("seed", 0ULL);
    const std::string out_dir = out_dir_of(cfg, flag_out);
    RunManifest manifest("interpolate", cfg.dump(2), seed);
    Timer timer;

    const json& r = cfg.value("interpolate", json::object());
    Checkpoint ckpt = load_model(r, manifest);
    const int id = r.value("sequence_id", 0);
    if (id < 0 || id >= ckpt.params.num_sequences())
        throw ValidationError("interpolate: unknown sequence id " + std::to_string(id) +
                              " (known ids: 0.." +
                              std::to_string(ckpt.params.num_sequences() - 1) + ")");
    const auto dims = dims_from(r, "dims");
    const int in_frames = r.value("in_frames", 10);
    const int factor = r.value("factor", 2);
    if (in_frames < 2 || factor < 1)
        throw ValidationError("interpolate needs in_frames >= 2 and factor >= 1");
    const int out_frames = (in_frames - 1) * factor + 1;

    Vec<double> z = ckpt.params.latent_codes.row(id).transpose();
    auto out = temporal_superresolve(ckpt.params, ckpt.net, z, dims, out_frames);
    char dname[24];
    std::snprintf(dname, sizeof dname, "interp_seq%03d", id);
    write_frames(out, fs::path(out_dir) / dname, "f32", r.value("meshes", false), 0.0,
                 manifest);
    manifest.add_timing("total", timer.seconds());
    manifest.write((fs::path(out_dir) / "interpolate.manifest.json").string());
    log_line("interpolated sequence " + std::to_string(id) + " to " +
             std::to_string(out_frames) + " frames");
    return 0;
}

// --------------------------------------------------------------- evaluate

struct GridRef {
    std::string rel;
    fs::path path;
    int sequence = 0;
};

std::vector<GridRef> collect_grids(const fs::path& root) {
    if (!fs::is_directory(root)) throw IoError("not a directory: " + root.string());
    std::vector<GridRef> out;
    std::vector<fs::path> dirs{root};
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file() || e.path().extension() != ".json") continue;
        const auto name = e.path().filename().string();
        if (name.find("manifest") != std::string::npos) continue;
        out.push_back({fs::relative(e.path(), root).string(), e.path(), 0});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rel < b.rel; });
    // Sequence index = order of the immediate parent directory.
    std::map<std::string, int> seq_of;
    for (auto& g : out) {
        const std::string parent = fs::path(g.rel).parent_path().string();
        auto [it, fresh] = seq_of.try_emplace(parent, static_cast<int>(seq_of.size()));
        g.sequence = it->second;
    }
    return out;
}

VoxelGrid load_occupancy(const fs::path& path) {
    VoxelGrid g = load_grid(path.string());
    bool binary = true;
    for (double v : g.values)
        if (v != 0.0 && v != 1.0) {
            binary = false;
            break;
        }
    return binary ? g : occupancy_from_sdf(g);
}

void write_descriptor_csv(const std::vector<DescriptorRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "sequence,frame,volume_um3,area_um2,sphericity\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.12g,%.12g,%.12g\n", r.sequence_id, r.frame,
                      r.volume, r.surface_area, r.sphericity);
        out << buf;
    }
}

int cmd_evaluate(const json& cfg, const std::string& flag_out) {
    const std::uint64_t seed = cfg.value("seed", 0ULL);
    const std::string out_dir = out_dir_of(cfg, flag_out);
    RunManifest manifest("evaluate", cfg.dump(2), seed);
    Timer timer;

    const json& e = cfg.value("evaluate", json::object());
    if (!e.contains("reference_dir") || !e.contains("candidate_dir"))
        throw ValidationError("evaluate needs reference_dir and candidate_dir");
    const fs::path ref_root = e.at("reference_dir").get<std::string>();
    const fs::path cand_root = e.at("candidate_dir").get<std::string>();
    const bool do_jaccard = e.value("jaccard", true);
    const bool do_descriptors = e.value("descriptors", true);
    const auto vs = e.value("voxel_size_um", std::vector<double>{1.0, 1.0, 1.0});
    if (vs.size() != 3) throw ValidationError("evaluate.voxel_size_um must have 3 entries");
    const Vec3 voxel_um{vs[0], vs[1], vs[2]};

    auto refs = collect_grids(ref_root);
    auto cands = collect_grids(cand_root);
    if (refs.empty() || cands.empty())
        throw ValidationError("evaluate: no grid files found under the input directories");
    for (const auto& g : refs) manifest.add_input(g.path.string());
    for (const auto& g : cands) manifest.add_input(g.path.string());

    json summary;
    summary["version"] = version_string();

    if (do_jaccard) {
        if (refs.size() != cands.size())
            throw ValidationError("evaluate: reference and candidate frame counts differ (" +
                                  std::to_string(refs.size()) + " vs " +
                                  std::to_string(cands.size()) + ")");
        std::ofstream ji_csv((fs::path(out_dir) / "jaccard.csv"));
        ji_csv << "sequence,frame,jaccard\n";
        std::vector<double> ji;
        for (std::size_t i = 0; i < refs.size(); ++i) {
            VoxelGrid a = load_occupancy(refs[i].path);
            VoxelGrid b = load_occupancy(cands[i].path);
            if (a.dims != b.dims)
                throw ValidationError("evaluate: dims mismatch between " + refs[i].rel +
                                      " and " + cands[i].rel);
            double v = jaccard(a, b);
            ji.push_back(v);
            char buf[96];
            std::snprintf(buf, sizeof buf, "%d,%d,%.12g\n", refs[i].sequence, a.time_index, v);
            ji_csv << buf;
        }
        double mean = 0.0;
        for (double v : ji) mean += v;
        mean /= static_cast<double>(ji.size());
        double var = 0.0;
        for (double v : ji) var += (v - mean) * (v - mean);
        double stddev = ji.size() > 1 ? std::sqrt(var / static_cast<double>(ji.size() - 1)) : 0.0;
        char formatted[48];
        std::snprintf(formatted, sizeof formatted, "%.3f±%.3f", mean, stddev);
        summary["jaccard"] = {{"mean", mean},
                              {"stddev", stddev},
                              {"count", ji.size()},
                              {"formatted", formatted}};
        manifest.add_output((fs::path(out_dir) / "jaccard.csv").string());
        log_line(std::string("jaccard ") + formatted);
    }

    if (do_descriptors) {
        auto table_for = [&](const std::vector<GridRef>& grids) {
            std::vector<DescriptorRow> rows;
            for (const auto& g : grids) {
                VoxelGrid occ = load_occupancy(g.path);
                bool any = false;
                for (double v : occ.values) any |= v != 0.0;
                if (!any) {
                    log_line("warning: skipping empty shape in " + g.rel);
                    continue;
                }
                // Descriptor code expects an SDF-like field (inside < 0).
                VoxelGrid field = occ;
                for (double& v : field.values) v = v != 0.0 ? -1.0 : 1.0;
                DescriptorRow row = descriptors(field, voxel_um);
                row.sequence_id = g.sequence;
                row.frame = occ.time_index;
                rows.push_back(row);
            }
            return rows;
        };
        auto ref_rows = table_for(refs);
        auto cand_rows = table_for(cands);
        const std::string ref_csv = (fs::path(out_dir) / "descriptors_reference.csv").string();
        const std::string cand_csv = (fs::path(out_dir) / "descriptors_candidate.csv").string();
        write_descriptor_csv(ref_rows, ref_csv);
        write_descriptor_csv(cand_rows, cand_csv);
        manifest.add_output(ref_csv);
        manifest.add_output(cand_csv);

        auto column = [](const std::vector<DescriptorRow>& rows, int which) {
            std::vector<double> v;
            for (const auto& r : rows)
                v.push_back(which == 0 ? r.volume : which == 1 ? r.surface_area : r.sphericity);
            return v;
        };
        const char* names[3] = {"volume", "surface_area", "sphericity"};
        if (ref_rows.empty() || cand_rows.empty()) {
            summary["ks"] = "skipped: no non-empty shapes";
            log_line("warning: skipping KS tests (no non-empty shapes)");
        } else
        for (int which = 0; which < 3; ++which) {
            auto xs = column(ref_rows, which), ys = column(cand_rows, which);
            KsResult ks = ks_two_sample(xs, ys);
            summary["ks"][names[which]] = {{"statistic", ks.statistic},
                                           {"p_value", ks.p_value},
                                           {"n", ks.n},
                                           {"m", ks.m}};
            std::string qq_path =
                (fs::path(out_dir) / (std::string("qq_") + names[which] + ".csv")).string();
            std::ofstream qq(qq_path);
            qq << "reference_quantile,candidate_quantile\n";
            char buf[96];
            for (const auto& [qx, qy] : qq_pairs(xs, ys)) {
                std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", qx, qy);
                qq << buf;
            }
            manifest.add_output(qq_path);
        }
    }

    const std::string summary_path = (fs::path(out_dir) / "metrics.json").string();
    std::ofstream(summary_path) << summary.dump(2) << "\n";
    manifest.add_output(summary_path);
    manifest.add_timing("total", timer.seconds());
    manifest.write((fs::path(out_dir) / "evaluate.manifest.json").string());
    log_line("wrote " + summary_path);
    return 0;
}

// ------------------------------------------------------------------- mesh

int cmd_mesh(const json& cfg, const std::string& flag_out) {
    const std::uint64_t seed = cfg.value("seed", 0ULL);
    const std::string out_dir = out_dir_of(cfg, flag_out);
    RunManifest manifest("mesh", cfg.dump(2), seed);
    Timer timer;

    const json& m = cfg.value("mesh", json::object());
    if (!m.contains("input")) throw ValidationError("mesh.input (file or directory) required");
    const fs::path input = m.at("input").get<std::string>();
    const double iso = m.value("iso", 0.0);
    std::vector<fs::path> files;
    if (fs::is_directory(input)) {
        for (const auto& g : collect_grids(input)) files.push_back(g.path);
    } else {
        files.push_back(input);
    }
    if (files.empty()) throw ValidationError("mesh: no grid files under " + input.string());

    for (const auto& f : files) {
        manifest.add_input(f.string());
        VoxelGrid g = load_grid(f.string());
        TriangleMesh mesh = marching_cubes(g, iso);
        mesh.frame = g.time_index;
        fs::path out = fs::path(out_dir) / f.stem();
        out.replace_extension(".obj");
        export_obj(mesh, out.string());
        manifest.add_output(out.string());
    }
    manifest.add_timing("total", timer.seconds());
    manifest.write((fs::path(out_dir) / "mesh.manifest.json").string());
    log_line("meshed " + std::to_string(files.size()) + " grids into " + out_dir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"neural spatio-temporal shape pipeline"};
    app.set_version_flag("--version", std::string(version_string()));
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::vector<std::string> overrides;
    int threads = 0;

    const std::vector<std::string> names{"prepare",     "train",       "generate", "reconstruct",
                                         "interpolate", "evaluate",    "mesh"};
    const std::vector<std::string> descs{
        "build SDF sample sets from synthetic specs or mask directories",
        "fit the auto-decoder to prepared sample sets",
        "sample or perturb latent codes and emit new sequences",
        "decode a training sequence from its optimized latent code",
        "evaluate a sequence at a denser temporal sampling",
        "compare grids: Jaccard, shape descriptors, KS tests",
        "extract OBJ meshes from grid files"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config,-c", config_path, "JSON config file");
        sub->add_option("--set,-s", overrides, "dotted-path config override, key.path=value");
        sub->add_option("--threads,-t", threads, "worker threads (0: NSC_THREADS or hardware)");
        sub->add_option("--out,-o", out_dir, "output directory (overrides config output_dir)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        set_thread_count(threads);
        const json cfg = load_config(config_path, overrides);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "prepare") return cmd_prepare(cfg, out_dir);
        if (sub == "train") return cmd_train(cfg, out_dir);
        if (sub == "generate") return cmd_generate(cfg, out_dir);
        if (sub == "reconstruct") return cmd_reconstruct(cfg, out_dir);
        if (sub == "interpolate") return cmd_interpolate(cfg, out_dir);
        if (sub == "evaluate") return cmd_evaluate(cfg, out_dir);
        if (sub == "mesh") return cmd_mesh(cfg, out_dir);
        std::fprintf(stderr, "nsc: unknown subcommand %s\n", sub.c_str());
        return 2;
    } catch (const ValidationError& ex) {
        std::fprintf(stderr, "nsc: validation error: %s\n", ex.what());
        return 2;
    } catch (const NumericalError& ex) {
        std::fprintf(stderr, "nsc: numerical error: %s\n", ex.what());
        return 3;
    } catch (const IoError& ex) {
        std::fprintf(stderr, "nsc: io error: %s\n", ex.what());
        return 4;
    } catch (const json::exception& ex) {
        std::fprintf(stderr, "nsc: config error: %s\n", ex.what());
        return 2;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "nsc: error: %s\n", ex.what());
        return 3;
    }
}
