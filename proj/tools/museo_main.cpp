#include <CLI11.hpp>

#include "museo/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"museo - painting retrieval engine"};
    app.require_subcommand(1);

    museo::cli::IndexArgs index_args;
    std::string index_config;
    auto* index = app.add_subcommand("index", "build and persist a museum index");
    index->add_option("--museum", index_args.museum_dir, "museum image directory")->required();
    index->add_option("--catalog", index_args.catalog, "label/author/title TSV")->required();
    index->add_option("--config", index_config, "config file");
    index->add_option("--out", index_args.out, "output index path")->required();

    museo::cli::QueryArgs query_args;
    std::string query_config, query_artifacts;
    auto* query = app.add_subcommand("query", "rank museum paintings for each query image");
    query->add_option("--index", query_args.index, "index file")->required();
    query->add_option("--queries", query_args.queries_dir, "query image directory")->required();
    query->add_option("--k", query_args.k, "ranks to keep")->default_val(1);
    query->add_option("--mode", query_args.mode, "color|texture|text|combined|feature")
        ->default_val("color");
    query->add_option("--config", query_config, "config file");
    query->add_option("--out", query_args.out, "results JSON path")->required();
    query->add_option("--emit-artifacts", query_artifacts, "directory for masks/boxes/angles");
    query->add_option("--jobs", query_args.jobs, "worker threads (0 = config)");

    museo::cli::EvalArgs eval_args;
    std::string eval_out;
    double eval_assert = -1.0;
    auto* eval = app.add_subcommand("eval", "mAP@K of a results file against ground truth");
    eval->add_option("--results", eval_args.results, "results JSON")->required();
    eval->add_option("--gt", eval_args.gt, "ground-truth JSON")->required();
    eval->add_option("--k", eval_args.k, "rank cutoff")->default_val(1);
    eval->add_option("--out", eval_out, "report JSON path");
    eval->add_option("--assert", eval_assert, "exit 1 when mAP@K is below this");

    museo::cli::MaskEvalArgs mask_args;
    std::string mask_out;
    double mask_assert = -1.0;
    auto* mask_eval = app.add_subcommand("mask-eval", "pixel precision/recall/F1 of emitted masks");
    mask_eval->add_option("--pred", mask_args.pred_dir, "artifact directory")->required();
    mask_eval->add_option("--gt", mask_args.gt, "ground-truth JSON")->required();
    mask_eval->add_option("--out", mask_out, "report JSON path");
    mask_eval->add_option("--assert", mask_assert, "exit 1 when F1 is below this");

    museo::cli::TextboxEvalArgs tb_args;
    std::string tb_out;
    double tb_assert = -1.0;
    auto* tb_eval = app.add_subcommand("textbox-eval", "mIoU of emitted text boxes");
    tb_eval->add_option("--pred", tb_args.pred_dir, "artifact directory")->required();
    tb_eval->add_option("--gt", tb_args.gt, "ground-truth JSON")->required();
    tb_eval->add_option("--out", tb_out, "report JSON path");
    tb_eval->add_option("--assert", tb_assert, "exit 1 when mIoU is below this");

    museo::cli::AngleEvalArgs angle_args;
    std::string angle_out;
    double angle_assert = -1.0;
    auto* angle_eval = app.add_subcommand("angle-eval", "mean angular error of emitted angles");
    angle_eval->add_option("--pred", angle_args.pred_dir, "artifact directory")->required();
    angle_eval->add_option("--gt", angle_args.gt, "ground-truth JSON")->required();
    angle_eval->add_option("--out", angle_out, "report JSON path");
    angle_eval->add_option("--assert", angle_assert, "exit 1 when mAE exceeds this");

    museo::cli::ClusterArgs cluster_args;
    std::string cluster_config;
    auto* cluster = app.add_subcommand("cluster", "two-stage k-means over the indexed museum");
    cluster->add_option("--index", cluster_args.index, "index file")->required();
    cluster->add_option("--config", cluster_config, "config file");
    cluster->add_option("--out", cluster_args.out, "clusters JSON path")->required();
    cluster->add_option("--seed", cluster_args.seed, "RNG seed")->default_val(1);

    museo::cli::SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a synthetic museum and query dataset");
    synth->add_option("--out", synth_args.out_dir, "output directory")->required();
    synth->add_option("--seed", synth_args.seed, "RNG seed")->default_val(1);
    synth->add_option("--profile", synth_args.profile, "ds1|ds2|ds3|ds4")->default_val("ds1");
    synth->add_option("--museum-size", synth_args.museum_size, "museum painting count")
        ->default_val(30);
    synth->add_option("--scenes", synth_args.scenes, "query scene count")->default_val(30);

    CLI11_PARSE(app, argc, argv);

    if (index->parsed()) {
        if (!index_config.empty()) index_args.config = index_config;
        return museo::cli::cmd_index(index_args);
    }
    if (query->parsed()) {
        if (!query_config.empty()) query_args.config = query_config;
        if (!query_artifacts.empty()) query_args.emit_artifacts = query_artifacts;
        return museo::cli::cmd_query(query_args);
    }
    if (eval->parsed()) {
        if (!eval_out.empty()) eval_args.out = eval_out;
        if (eval_assert >= 0.0) eval_args.assert_min = eval_assert;
        return museo::cli::cmd_eval(eval_args);
    }
    if (mask_eval->parsed()) {
        if (!mask_out.empty()) mask_args.out = mask_out;
        if (mask_assert >= 0.0) mask_args.assert_min = mask_assert;
        return museo::cli::cmd_mask_eval(mask_args);
    }
    if (tb_eval->parsed()) {
        if (!tb_out.empty()) tb_args.out = tb_out;
        if (tb_assert >= 0.0) tb_args.assert_min = tb_assert;
        return museo::cli::cmd_textbox_eval(tb_args);
    }
    if (angle_eval->parsed()) {
        if (!angle_out.empty()) angle_args.out = angle_out;
        if (angle_assert >= 0.0) angle_args.assert_max = angle_assert;
        return museo::cli::cmd_angle_eval(angle_args);
    }
    if (cluster->parsed()) {
        if (!cluster_config.empty()) cluster_args.config = cluster_config;
        return museo::cli::cmd_cluster(cluster_args);
    }
    if (synth->parsed()) return museo::cli::cmd_synth(synth_args);
    return museo::cli::kFatal;
}
