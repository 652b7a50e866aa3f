#ifndef MUSEO_CLI_HPP
#define MUSEO_CLI_HPP

#include <filesystem>
#include <optional>
#include <string>

namespace museo::cli {

// Exit codes shared by every command.
constexpr int kOk = 0;
constexpr int kBelowThreshold = 1;
constexpr int kFatal = 2;

struct IndexArgs {
    std::filesystem::path museum_dir;
    std::filesystem::path catalog;
    std::optional<std::filesystem::path> config;
    std::filesystem::path out;
};
int cmd_index(const IndexArgs& args);

struct QueryArgs {
    std::filesystem::path index;
    std::filesystem::path queries_dir;
    int k = 1;
    std::string mode = "color";
    std::optional<std::filesystem::path> config;
    std::filesystem::path out;
    std::optional<std::filesystem::path> emit_artifacts;
    int jobs = 0;  // 0 = config value
};
int cmd_query(const QueryArgs& args);

struct EvalArgs {
    std::filesystem::path results;
    std::filesystem::path gt;
    int k = 1;
    std::optional<std::filesystem::path> out;
    std::optional<double> assert_min;  // exit 1 when mAP@K falls below
};
int cmd_eval(const EvalArgs& args);

struct MaskEvalArgs {
    std::filesystem::path pred_dir;
    std::filesystem::path gt;
    std::optional<std::filesystem::path> out;
    std::optional<double> assert_min;  // applies to F1
};
int cmd_mask_eval(const MaskEvalArgs& args);

struct TextboxEvalArgs {
    std::filesystem::path pred_dir;
    std::filesystem::path gt;
    std::optional<std::filesystem::path> out;
    std::optional<double> assert_min;  // applies to mIoU
};
int cmd_textbox_eval(const TextboxEvalArgs& args);

struct AngleEvalArgs {
    std::filesystem::path pred_dir;
    std::filesystem::path gt;
    std::optional<std::filesystem::path> out;
    std::optional<double> assert_max;  // exit 1 when mAE exceeds
};
int cmd_angle_eval(const AngleEvalArgs& args);

struct ClusterArgs {
    std::filesystem::path index;
    std::optional<std::filesystem::path> config;
    std::filesystem::path out;
    std::uint64_t seed = 1;
};
int cmd_cluster(const ClusterArgs& args);

struct SynthArgs {
    std::filesystem::path out_dir;
    std::uint64_t seed = 1;
    std::string profile = "ds1";
    int museum_size = 30;
    int scenes = 30;
};
int cmd_synth(const SynthArgs& args);

}  // namespace museo::cli

#endif
