#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "revfeat/augment.hpp"
#include "revfeat/features.hpp"
#include "revfeat/geometry.hpp"
#include "revfeat/io.hpp"
#include "revfeat/metrics.hpp"
#include "revfeat/simulate.hpp"
#include "revfeat/threading.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace revfeat;

namespace {

std::vector<std::pair<double, double>> parse_height_pairs(const std::vector<std::string>& specs) {
    std::vector<std::pair<double, double>> out;
    for (const std::string& s : specs) {
        const std::size_t colon = s.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--heights", "expected h_source:h_mic, got '" + s + "'");
        out.emplace_back(std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1)));
    }
    return out;
}

int run_itdg(const std::vector<double>& distances, const std::vector<std::string>& height_specs,
             double speed, bool as_json) {
    const auto heights = parse_height_pairs(height_specs);
    const auto rows = itdg_table(distances, heights, speed);
    if (as_json) {
        json out = json::array();
        for (const ItdgRow& r : rows)
            out.push_back({{"source_height_m", r.source_height_m},
                           {"mic_height_m", r.mic_height_m},
                           {"distance_m", r.distance_m},
                           {"direct_ms", r.direct_ms},
                           {"first_reflection_ms", r.first_ref_ms},
                           {"itdg_ms", r.itdg_ms}});
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("%8s %8s %8s %12s %14s %10s\n", "h_s [m]", "h_m [m]", "d [m]", "direct [ms]",
                "1st refl [ms]", "ITDG [ms]");
    for (const ItdgRow& r : rows)
        std::printf("%8.2f %8.2f %8.2f %12.1f %14.1f %10.1f\n", r.source_height_m, r.mic_height_m,
                    r.distance_m, r.direct_ms, r.first_ref_ms, r.itdg_ms);
    return 0;
}

int run_extract(const std::vector<std::string>& inputs, const std::string& out_dir,
                const std::string& mode_name, double chunk_seconds, bool training, bool as_json) {
    const FeatureMode mode = parse_feature_mode(mode_name);
    const FeatureConfig cfg;
    fs::create_directories(out_dir);

    struct Job {
        std::size_t clip_index;
        std::size_t chunk_index;
        ChunkPlan plan;
        std::string out_path;
    };
    std::vector<AudioClip> clips;
    std::vector<Job> jobs;
    const std::size_t chunk_len =
        static_cast<std::size_t>(std::lround(chunk_seconds * cfg.sample_rate));
    for (const std::string& path : inputs) {
        AudioClip clip = read_wav(path);
        if (clip.channels() != 4)
            throw std::runtime_error(path + ": expected 4 FOA channels, got " +
                                     std::to_string(clip.channels()));
        if (clip.sample_rate != cfg.sample_rate)
            throw std::runtime_error(path + ": expected " + std::to_string(cfg.sample_rate) +
                                     " Hz audio, got " + std::to_string(clip.sample_rate) + " Hz");
        const auto plans = plan_chunks(clip.length(), clip.sample_rate, chunk_seconds, training);
        const std::string stem = fs::path(path).stem().string();
        for (std::size_t i = 0; i < plans.size(); ++i) {
            char name[512];
            std::snprintf(name, sizeof name, "%s_chunk%03zu.rvft", stem.c_str(), i);
            jobs.push_back({clips.size(), i, plans[i], (fs::path(out_dir) / name).string()});
        }
        clips.push_back(std::move(clip));
    }

    std::vector<json> reports(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t j) {
        const Job& job = jobs[j];
        const AudioClip chunk = slice_chunk(clips[job.clip_index], job.plan.start, chunk_len);
        const FeatureStack stack = stack_features(chunk, mode, cfg);
        write_tensor(job.out_path, stack, cfg);
        reports[j] = {{"input", inputs[job.clip_index]},
                      {"chunk", job.chunk_index},
                      {"start_s", static_cast<double>(job.plan.start) / cfg.sample_rate},
                      {"padded", job.plan.padded},
                      {"output", job.out_path},
                      {"mode", feature_mode_name(mode)},
                      {"shape", {stack.channels, stack.frames, stack.bins}}};
    });

    if (as_json) {
        std::cout << json(reports).dump(2) << "\n";
    } else {
        for (const json& r : reports)
            std::printf("%s -> %s (%zux%zux%zu, %s)\n", r["input"].get<std::string>().c_str(),
                        r["output"].get<std::string>().c_str(), r["shape"][0].get<std::size_t>(),
                        r["shape"][1].get<std::size_t>(), r["shape"][2].get<std::size_t>(),
                        r["mode"].get<std::string>().c_str());
    }
    return 0;
}

int run_augment(const std::string& in_wav, const std::string& in_csv, const std::string& out_dir,
                bool as_json) {
    const AudioClip clip = read_wav(in_wav);
    if (clip.channels() != 4)
        throw std::runtime_error(in_wav + ": expected 4 FOA channels, got " +
                                 std::to_string(clip.channels()));
    const std::vector<EventRecord> events = read_metadata_csv(in_csv);
    fs::create_directories(out_dir);
    const std::string stem = fs::path(in_wav).stem().string();

    const auto expanded = acs_expand(clip, events);
    std::vector<json> reports(expanded.size());
    parallel_for(expanded.size(), [&](std::size_t i) {
        const AcsTransform& t = acs_transforms()[i];
        char suffix[64];
        std::snprintf(suffix, sizeof suffix, "_acs%zu", i);
        const std::string wav_path = (fs::path(out_dir) / (stem + suffix + ".wav")).string();
        const std::string csv_path = (fs::path(out_dir) / (stem + suffix + ".csv")).string();
        write_wav(wav_path, expanded[i].first);
        write_metadata_csv(csv_path, expanded[i].second);
        reports[i] = {{"transform", t.id},
                      {"azimuth_rotation_deg", t.azimuth_deg},
                      {"elevation_flip", t.elevation_flip},
                      {"wav", wav_path},
                      {"csv", csv_path}};
    });

    if (as_json) {
        std::cout << json(reports).dump(2) << "\n";
    } else {
        for (const json& r : reports)
            std::printf("acs %d: rot %3d deg%s -> %s\n", r["transform"].get<int>(),
                        r["azimuth_rotation_deg"].get<int>(),
                        r["elevation_flip"].get<bool>() ? ", elevation flip" : "",
                        r["wav"].get<std::string>().c_str());
    }
    return 0;
}

json ci_to_json(const JackknifeEstimate& e) {
    return {{"point", e.point}, {"center", e.pseudo_mean}, {"low", e.low}, {"high", e.high}};
}

int run_eval(const std::string& pred_dir, const std::string& ref_dir, bool tp_only, bool as_json) {
    const PairAveraging averaging = tp_only ? PairAveraging::tp_only : PairAveraging::all_matched;
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(ref_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    if (names.empty()) throw std::runtime_error(ref_dir + ": no reference .csv files found");

    std::vector<SequenceData> sequences;
    std::vector<EventRecord> all_preds, all_refs;
    for (const std::string& name : names) {
        const fs::path pred_path = fs::path(pred_dir) / name;
        if (!fs::exists(pred_path))
            throw std::runtime_error(pred_path.string() + ": missing prediction file");
        SequenceData seq;
        seq.preds = read_metadata_csv(pred_path.string());
        seq.refs = read_metadata_csv((fs::path(ref_dir) / name).string());
        sequences.push_back(std::move(seq));
    }

    // Pooled scores with sequences kept distinct, plus per-metric jackknife CIs.
    const auto pick_f = [](const SeldScores& s) { return s.f_score; };
    const auto pick_doae = [](const SeldScores& s) { return s.doae; };
    const auto pick_rde = [](const SeldScores& s) { return s.rde; };
    const auto pick_seld = [](const SeldScores& s) { return s.seld; };

    SeldScores pooled;
    std::optional<JackknifeEstimate> ci_f, ci_doae, ci_rde, ci_seld;
    if (sequences.size() >= 2) {
        ci_f = jackknife_ci(sequences, pick_f, averaging);
        ci_doae = jackknife_ci(sequences, pick_doae, averaging);
        ci_rde = jackknife_ci(sequences, pick_rde, averaging);
        ci_seld = jackknife_ci(sequences, pick_seld, averaging);
    }
    {
        // Pool by offsetting frames so sequences cannot collide.
        std::vector<EventRecord> preds, refs;
        int frame_offset = 0;
        for (const SequenceData& seq : sequences) {
            int max_frame = 0;
            for (const EventRecord& e : seq.preds) max_frame = std::max(max_frame, e.frame);
            for (const EventRecord& e : seq.refs) max_frame = std::max(max_frame, e.frame);
            for (EventRecord e : seq.preds) {
                e.frame += frame_offset;
                preds.push_back(e);
            }
            for (EventRecord e : seq.refs) {
                e.frame += frame_offset;
                refs.push_back(e);
            }
            frame_offset += max_frame + 1;
        }
        pooled = score(preds, refs, averaging);
    }

    const char* avg_name = tp_only ? "tp_only" : "all_matched";
    if (as_json) {
        json out;
        out["sequences"] = sequences.size();
        out["averaging"] = avg_name;
        out["overall"] = {{"f_score", pooled.f_score},
                          {"doae_deg", pooled.doae},
                          {"rde", pooled.rde},
                          {"seld", pooled.seld}};
        if (ci_f) {
            out["ci95"] = {{"f_score", ci_to_json(*ci_f)},
                           {"doae_deg", ci_to_json(*ci_doae)},
                           {"rde", ci_to_json(*ci_rde)},
                           {"seld", ci_to_json(*ci_seld)}};
        }
        json per_class = json::array();
        for (const ClassScore& c : pooled.per_class)
            per_class.push_back({{"class", c.class_id},
                                 {"tp", c.tp},
                                 {"fp", c.fp},
                                 {"fn", c.fn},
                                 {"f_score", c.f},
                                 {"doae_deg", c.doae},
                                 {"rde", c.rde},
                                 {"sentinel", c.sentinel}});
        out["per_class"] = per_class;
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    std::printf("sequences: %zu   pair averaging: %s\n\n", sequences.size(), avg_name);
    const auto print_row = [](const char* name, double value,
                              const std::optional<JackknifeEstimate>& ci) {
        if (ci)
            std::printf("%-8s %9.4f   [%.4f, %.4f]\n", name, value, ci->low, ci->high);
        else
            std::printf("%-8s %9.4f\n", name, value);
    };
    print_row("F-score", pooled.f_score, ci_f);
    print_row("DOAE", pooled.doae, ci_doae);
    print_row("RDE", pooled.rde, ci_rde);
    print_row("SELD", pooled.seld, ci_seld);
    std::printf("\n%6s %6s %6s %6s %9s %10s %8s\n", "class", "TP", "FP", "FN", "F", "DOAE", "RDE");
    for (const ClassScore& c : pooled.per_class)
        std::printf("%6d %6ld %6ld %6ld %9.4f %10.2f %8.4f%s\n", c.class_id, c.tp, c.fp, c.fn, c.f,
                    c.doae, c.rde, c.sentinel ? "  (sentinel)" : "");
    return 0;
}

int run_simulate(const std::vector<double>& distances, double hs, double hm, double beta,
                 double t60, double tail_start, double tail_level, unsigned seed, double duration,
                 int sample_rate, long frame_begin, long frame_end, bool as_json) {
    const AudioClip dry = burst_noise(duration, sample_rate, seed);
    const FeatureConfig cfg;
    const MelFilterbank fb =
        mel_filterbank(cfg.n_mels, cfg.stft.fft_len, sample_rate, cfg.f_min, sample_rate / 2.0);

    std::vector<json> rows;
    for (double d : distances) {
        SceneGeometry g{d, hs, hm};
        std::optional<RirTail> tail;
        if (t60 > 0.0) {
            RirTail t;
            t.start_s = tail_start > 0.0 ? tail_start : first_reflection_delay(g) + 0.003;
            t.t60_s = t60;
            t.level = tail_level;
            t.seed = seed + 1;
            tail = t;
        }
        const std::size_t rir_len = static_cast<std::size_t>(std::lround(0.5 * sample_rate));
        const SyntheticRIR rir = make_rir(g, beta, tail, sample_rate, rir_len);
        const AudioClip wet = spatialize(dry, rir);

        const FeatureStack acc = stpacc_stack(wet, cfg.stpacc_stft);
        const std::size_t f_end = frame_end > 0
                                      ? std::min<std::size_t>(frame_end, acc.frames)
                                      : acc.frames;
        const ReflectionLag lag =
            dominant_reflection_lag(acc, static_cast<std::size_t>(frame_begin), f_end, sample_rate);

        const DirectReverbPair pair = split_direct_reverb(wet, cfg.stft, cfg.wpe);
        const std::vector<Grid> drr = drr_features(pair, cfg.stft, fb);
        double mean_drr = 0.0;
        for (double v : drr[0].v) mean_drr += v;
        mean_drr /= static_cast<double>(drr[0].v.size());

        rows.push_back({{"distance_m", d},
                        {"itdg_ms", itdg(g) * 1e3},
                        {"measured_lag_ms", lag.found ? json(lag.seconds * 1e3) : json(nullptr)},
                        {"reflection_found", lag.found},
                        {"true_drr_db", true_drr(rir.samples, sample_rate)},
                        {"mean_drr_feature_db", mean_drr}});
    }

    if (as_json) {
        std::cout << json(rows).dump(2) << "\n";
        return 0;
    }
    std::printf("%7s %10s %14s %14s %19s\n", "d [m]", "ITDG [ms]", "measured [ms]", "true DRR [dB]",
                "mean DRR feat [dB]");
    for (const json& r : rows) {
        char measured[32];
        if (r["reflection_found"].get<bool>())
            std::snprintf(measured, sizeof measured, "%.2f", r["measured_lag_ms"].get<double>());
        else
            std::snprintf(measured, sizeof measured, "%s", "-");
        std::printf("%7.2f %10.2f %14s %14.2f %19.2f\n", r["distance_m"].get<double>(),
                    r["itdg_ms"].get<double>(), measured, r["true_drr_db"].get<double>(),
                    r["mean_drr_feature_db"].get<double>());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reverberation feature extraction and SELD evaluation toolkit"};
    app.require_subcommand(1);

    // itdg
    auto* itdg_cmd = app.add_subcommand("itdg", "Print direct/first-reflection delays and ITDG");
    std::vector<double> itdg_distances{1.0, 1.5, 2.0, 2.5, 3.0};
    std::vector<std::string> itdg_heights{"1.5:1.5", "0.9:1.5"};
    double itdg_speed = kSpeedOfSound;
    bool itdg_json = false;
    itdg_cmd->add_option("--distances", itdg_distances, "Source distances in meters")
        ->delimiter(',');
    itdg_cmd->add_option("--heights", itdg_heights, "Height pairs as h_source:h_mic")
        ->delimiter(',');
    itdg_cmd->add_option("--speed", itdg_speed, "Speed of sound in m/s");
    itdg_cmd->add_flag("--json", itdg_json, "Machine-readable output");

    // extract
    auto* extract_cmd = app.add_subcommand("extract", "Extract feature tensors from FOA WAV files");
    std::vector<std::string> extract_inputs;
    std::string extract_out, extract_mode = "none";
    double extract_chunk = 3.0;
    bool extract_train = false, extract_json = false;
    extract_cmd->add_option("--in", extract_inputs, "Input WAV files")->required()->expected(-1);
    extract_cmd->add_option("--out", extract_out, "Output directory")->required();
    extract_cmd
        ->add_option("--mode", extract_mode, "Feature mode: none, drr, dplusr or stpacc")
        ->check(CLI::IsMember({"none", "drr", "dplusr", "d_plus_r", "stpacc"}));
    extract_cmd->add_option("--chunk", extract_chunk, "Chunk length in seconds");
    extract_cmd->add_flag("--train", extract_train,
                          "Training chunking (starts every 1 s) instead of non-overlapping");
    extract_cmd->add_flag("--json", extract_json, "Machine-readable output");

    // augment
    auto* augment_cmd = app.add_subcommand("augment", "Write the 8 channel-swap augmentations");
    std::string augment_wav, augment_csv, augment_out;
    bool augment_json = false;
    augment_cmd->add_option("--in", augment_wav, "Input FOA WAV file")->required();
    augment_cmd->add_option("--meta", augment_csv, "Input metadata CSV")->required();
    augment_cmd->add_option("--out", augment_out, "Output directory")->required();
    augment_cmd->add_flag("--json", augment_json, "Machine-readable output");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Score predictions against references");
    std::string eval_pred, eval_ref;
    bool eval_tp_only = false, eval_json = false;
    eval_cmd->add_option("--pred", eval_pred, "Directory of prediction CSVs")->required();
    eval_cmd->add_option("--ref", eval_ref, "Directory of reference CSVs")->required();
    eval_cmd->add_flag("--tp-only", eval_tp_only,
                       "Average DOAE/RDE over true positives only instead of all matched pairs");
    eval_cmd->add_flag("--json", eval_json, "Machine-readable output");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Synthetic distance sweep with oracles");
    std::vector<double> sim_distances{1.0, 1.5, 2.0, 2.5, 3.0};
    double sim_hs = 1.5, sim_hm = 1.5, sim_beta = 0.7, sim_t60 = 0.0, sim_tail_start = 0.0,
           sim_tail_level = 0.05, sim_duration = 3.0;
    unsigned sim_seed = 7;
    int sim_sr = 24000;
    long sim_frame_begin = 0, sim_frame_end = 0;
    bool sim_json = false;
    sim_cmd->add_option("--distances", sim_distances, "Source distances in meters")->delimiter(',');
    sim_cmd->add_option("--hs", sim_hs, "Source height in meters");
    sim_cmd->add_option("--hm", sim_hm, "Microphone height in meters");
    sim_cmd->add_option("--beta", sim_beta, "Floor reflection coefficient");
    sim_cmd->add_option("--t60", sim_t60, "Tail T60 in seconds (0 disables the tail)");
    sim_cmd->add_option("--tail-start", sim_tail_start,
                        "Tail start in seconds (0 = just after the floor reflection)");
    sim_cmd->add_option("--tail-level", sim_tail_level, "Tail level");
    sim_cmd->add_option("--seed", sim_seed, "Excitation/tail seed");
    sim_cmd->add_option("--duration", sim_duration, "Excitation length in seconds");
    sim_cmd->add_option("--sr", sim_sr, "Sample rate");
    sim_cmd->add_option("--frame-begin", sim_frame_begin, "First frame for the lag measurement");
    sim_cmd->add_option("--frame-end", sim_frame_end, "Frame range end (0 = all frames)");
    sim_cmd->add_flag("--json", sim_json, "Machine-readable output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (itdg_cmd->parsed())
            return run_itdg(itdg_distances, itdg_heights, itdg_speed, itdg_json);
        if (extract_cmd->parsed())
            return run_extract(extract_inputs, extract_out, extract_mode, extract_chunk,
                               extract_train, extract_json);
        if (augment_cmd->parsed())
            return run_augment(augment_wav, augment_csv, augment_out, augment_json);
        if (eval_cmd->parsed()) return run_eval(eval_pred, eval_ref, eval_tp_only, eval_json);
        if (sim_cmd->parsed())
            return run_simulate(sim_distances, sim_hs, sim_hm, sim_beta, sim_t60, sim_tail_start,
                                sim_tail_level, sim_seed, sim_duration, sim_sr, sim_frame_begin,
                                sim_frame_end, sim_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
