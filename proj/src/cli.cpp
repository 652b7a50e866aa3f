#include "museo/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <json.hpp>

#include "museo/engine.hpp"
#include "museo/image_io.hpp"
#include "museo/synth.hpp"

namespace museo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunConfig load_config(const std::optional<fs::path>& path) {
    return path ? RunConfig::from_file(*path) : RunConfig{};
}

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> files;
    if (!fs::exists(dir)) throw UnreadableImage("no such directory: " + dir.string());
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; exceptions rethrow.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                fn(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<int>(jobs, static_cast<int>(n)); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UnreadableImage("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UnreadableImage("malformed JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw UnreadableImage("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

struct GtQuery {
    std::string image;
    double angle = 0.0;
    bool noisy = false;
    std::string mask;
    std::vector<int> labels;
    std::vector<Box> boxes;
    std::vector<Box> text_boxes;
};

std::vector<GtQuery> load_gt(const fs::path& path) {
    const json j = load_json(path);
    if (!j.contains("queries") || !j["queries"].is_array())
        throw UnreadableImage("ground truth lacks a queries array");
    std::vector<GtQuery> out;
    for (const auto& q : j["queries"]) {
        GtQuery gq;
        gq.image = q.at("image").get<std::string>();
        gq.angle = q.value("angle", 0.0);
        gq.noisy = q.value("noisy", false);
        gq.mask = q.value("mask", std::string{});
        for (const auto& p : q.at("paintings")) {
            gq.labels.push_back(p.at("label").get<int>());
            const auto& b = p.at("box");
            gq.boxes.push_back({b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(),
                                b.at(3).get<int>()});
            if (p.contains("text_box") && !p["text_box"].is_null()) {
                const auto& t = p["text_box"];
                gq.text_boxes.push_back({t.at(0).get<int>(), t.at(1).get<int>(),
                                         t.at(2).get<int>(), t.at(3).get<int>()});
            }
        }
        out.push_back(std::move(gq));
    }
    std::sort(out.begin(), out.end(),
              [](const GtQuery& a, const GtQuery& b) { return a.image < b.image; });
    return out;
}

int fatal(const std::string& message) {
    std::cerr << "error: " << message << '\n';
    return kFatal;
}

}  // namespace

int cmd_index(const IndexArgs& args) {
    try {
        const RunConfig cfg = load_config(args.config);
        engine::MuseumIndex index = engine::build_index(args.museum_dir, args.catalog, cfg);
        engine::save_index(index, args.out);
        std::cout << "indexed " << index.entries.size() << " paintings\n";
        return kOk;
    } catch (const std::exception& e) {
        return fatal(e.what());
    }
}

int cmd_query(const QueryArgs& args) {
    try {
        const RunConfig cfg = load_config(args.config);
        const engine::MuseumIndex index = engine::load_index(args.index, cfg);
        const engine::QueryMode mode = engine::mode_from_string(args.mode);
        const std::vector<fs::path> files = list_images(args.queries_dir);

        if (args.emit_artifacts) fs::create_directories(*args.emit_artifacts);

        std::vector<json> per_image(files.size());
        const int jobs = args.jobs > 0 ? args.jobs : cfg.jobs;
        parallel_for(files.size(), jobs, [&](std::size_t i) {
            const fs::path& file = files[i];
            RasterImage img = io::load_image(file);
            descriptors::SidecarOcr ocr(file);
            engine::QueryOutcome outcome = engine::query(index, img, args.k, mode, cfg, &ocr);

            json rankings = json::array();
            for (const auto& ranking : outcome.rankings) rankings.push_back(ranking);
            per_image[i] = std::move(rankings);

            if (args.emit_artifacts) {
                const std::string stem = file.stem().string();
                io::save_mask(preprocess::pipeline_mask_in_source(outcome.pipeline),
                              *args.emit_artifacts / (stem + "_mask.png"));
                std::ofstream boxes(*args.emit_artifacts / (stem + "_boxes.txt"),
                                    std::ios::trunc);
                for (const Box& b : preprocess::pipeline_boxes_in_source(outcome.pipeline))
                    boxes << b.x1 << ' ' << b.y1 << ' ' << b.x2 << ' ' << b.y2 << '\n';
                std::ofstream angle(*args.emit_artifacts / (stem + "_angle.txt"),
                                    std::ios::trunc);
                angle << outcome.pipeline.report.estimated_angle_deg << '\n';
            }
        });

        json results = json::array();
        for (auto& r : per_image) results.push_back(std::move(r));
        write_json(results, args.out);
        std::cout << "queried " << files.size() << " images\n";
        return kOk;
    } catch (const std::exception& e) {
        return fatal(e.what());
    }
}

int cmd_eval(const EvalArgs& args) {
    try {
        const json results = load_json(args.results);
        if (!results.is_array()) return fatal("results must be a JSON array");
        for (const auto& image : results) {
            if (!image.is_array()) return fatal("results: each image entry must be an array");
            for (const auto& painting : image) {
                if (!painting.is_array())
                    return fatal("results: each painting entry must be an array of labels");
                for (const auto& label : painting)
                    if (!label.is_number_integer())
                        return fatal("results: labels must be integers");
            }
        }
        const std::vector<GtQuery> gt = load_gt(args.gt);
        if (results.size() != gt.size())
            return fatal("results cover " + std::to_string(results.size()) + " images, ground truth " +
                         std::to_string(gt.size()));

        std::vector<metrics::RankedRetrieval> retrievals;
        for (std::size_t i = 0; i < gt.size(); ++i) {
            for (std::size_t p = 0; p < gt[i].labels.size(); ++p) {
                metrics::RankedRetrieval r;
                r.k = args.k;
                r.relevant = {gt[i].labels[p]};
                if (p < results[i].size())
                    r.ranking = results[i][p].get<std::vector<int>>();
                retrievals.push_back(std::move(r));
            }
        }
        const double map = metrics::map_at_k(retrievals);
        std::cout << "mAP@" << args.k << " = " << map << " (" << gt.size() << " images, "
                  << retrievals.size() << " paintings)\n";

        json report;
        report["map_at_k"] = map;
        report["k"] = args.k;
        report["images"] = gt.size();
        report["paintings"] = retrievals.size();
        write_json(report, args.out.value_or(args.results.parent_path() / "eval.json"));

        if (args.assert_min && map < *args.assert_min) return kBelowThreshold;
        return kOk;
    } catch (const std::exception& e) {
        return fatal(e.what());
    }
}

int cmd_mask_eval(const MaskEvalArgs& args) {
    try {
        const std::vector<GtQuery> gt = load_gt(args.gt);
        const fs::path gt_dir = args.gt.parent_path();
        double sum_p = 0, sum_r = 0, sum_f = 0;
        int counted = 0;
        for (const auto& q : gt) {
            if (q.mask.empty()) continue;
            const std::string stem = fs::path(q.image).stem().string();
            const fs::path pred_path = args.pred_dir / (stem + "_mask.png");
            if (!fs::exists(pred_path)) return fatal("missing predicted mask " + pred_path.string());
            BinaryMask pred = io::load_mask(pred_path);
            BinaryMask truth = io::load_mask(gt_dir / q.mask);
            metrics::PrfScores s = metrics::mask_prf(pred, truth);
            sum_p += s.precision;
            sum_r += s.recall;
            sum_f += s.f1;
            ++counted;
        }
        if (counted == 0) return fatal("ground truth contains no masks");
        json report;
        report["precision"] = sum_p / counted;
        report["recall"] = sum_r / counted;
        report["f1"] = sum_f / counted;
        report["images"] = counted;
        std::cout << "mask precision = " << report["precision"] << ", recall = "
                  << report["recall"] << ", f1 = " << report["f1"] << " (" << counted
                  << " images)\n";
        write_json(report, args.out.value_or(args.pred_dir / "mask_eval.json"));
        if (args.assert_min && report["f1"].get<double>() < *args.assert_min)
            return kBelowThreshold;
        return kOk;
    } catch (const std::exception& e) {
        return fatal(e.what());
    }
}

int cmd_textbox_eval(const TextboxEvalArgs& args) {
    try {
        const std::vector<GtQuery> gt = load_gt(args.gt);
        std::vector<metrics::BoxesPair> pairs;
        for (const auto& q : gt) {
            if (q.text_boxes.empty()) continue;
            metrics::BoxesPair pair;
            pair.ground_truth = q.text_boxes;
            const std::string stem = fs::path(q.image).stem().string();
            std::ifstream in(args.pred_dir / (stem + "_boxes.txt"));
            if (in) {
                Box b;
                while (in >> b.x1 >> b.y1 >> b.x2 >> b.y2) pair.predicted.push_back(b);
            }
            pairs.push_back(std::move(pair));
        }
        if (pairs.empty()) return fatal("ground truth contains no text boxes");
        const double miou = metrics::mean_iou(pairs);
        json report;
        report["miou"] = miou;
        report["images"] = pairs.size();
        std::cout << "text-box mIoU = " << miou << " (" << pairs.size() << " images)\n";
        write_json(report, args.out.value_or(args.pred_dir / "textbox_eval.json"));
        if (args.assert_min && miou < *args.assert_min) return kBelowThreshold;
        return kOk;
    } catch (const std::exception& e) {
        return fatal(e.what());
    }
}

int cmd_angle_eval(const AngleEvalArgs& args) {
    try {
        const std::vector<GtQuery> gt = load_gt(args.gt);
        std::vector<double> pred, truth;
        for (const auto& q : gt) {
            const std::string stem = fs::path(q.image).stem().string();
            std::ifstream in(args.pred_dir / (stem + "_angle.txt"));
            if (!in) return fatal("missing predicted angle for " + q.image);
            double a = 0.0;
            in >> a;
            pred.push_back(a);
            truth.push_back(q.angle);
        }
        if (pred.empty()) return fatal("ground truth contains no queries");
        const double mae = metrics::mean_angular_error(pred, truth);
        json report;
        report["mae_deg"] = mae;
        report["images"] = pred.size();
        std::cout << "mAE = " << mae << " deg (" << pred.size() << " images)\n";
        write_json(report, args.out.value_or(args.pred_dir / "angle_eval.json"));
        if (args.assert_max && mae > *args.assert_max) return kBelowThreshold;
        return kOk;
    } catch (const std::exception& e) {
        return fatal(e.what());
    }
}

int cmd_cluster(const ClusterArgs& args) {
    try {
        const RunConfig cfg = load_config(args.config);
        const engine::MuseumIndex index = engine::load_index(args.index, cfg);
        const std::map<int, int> clusters = engine::kmeans_cluster(index, cfg, args.seed);

        json by_label = json::object();
        std::map<int, std::vector<int>> members;
        for (const auto& [label, cluster] : clusters) {
            by_label[std::to_string(label)] = cluster;
            members[cluster].push_back(label);
        }
        json by_cluster = json::object();
        for (const auto& [cluster, labels] : members) by_cluster[std::to_string(cluster)] = labels;

        json out;
        out["labels"] = by_label;
        out["clusters"] = by_cluster;
        out["seed"] = args.seed;
        write_json(out, args.out);
        std::cout << "clustered " << clusters.size() << " paintings into " << members.size()
                  << " populated groups\n";
        return kOk;
    } catch (const std::exception& e) {
        return fatal(e.what());
    }
}

int cmd_synth(const SynthArgs& args) {
    try {
        synth::GeneratorOptions opts;
        opts.museum_size = args.museum_size;
        opts.scene_count = args.scenes;
        opts.seed = args.seed;
        opts.profile = synth::profile_from_string(args.profile);

        synth::generate_museum(args.out_dir / "museum", opts);
        synth::generate_dataset(args.out_dir / args.profile, opts);
        std::cout << "generated " << opts.museum_size << " museum paintings and " << opts.scene_count
                  << " " << args.profile << " scenes under " << args.out_dir.string() << '\n';
        return kOk;
    } catch (const std::exception& e) {
        return fatal(e.what());
    }
}

}  // namespace museo::cli
