#ifndef MUSEO_CONFIG_HPP
#define MUSEO_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "museo/descriptors.hpp"
#include "museo/features.hpp"
#include "museo/metrics.hpp"

namespace museo {

// Every tunable of the pipeline, loadable from a flat TOML-style file of
// `section.key = value` lines (or `[section]` headers). Unknown keys are
// rejected and ranges validated at load time.
struct RunConfig {
    // [pipeline]
    bool rotation_enabled = true;
    std::string rotation_method = "rect";  // rect | hough
    bool denoise_enabled = true;
    bool background_enabled = true;
    bool textbox_enabled = true;

    // [canny]
    double canny_low = 40.0;
    double canny_high = 100.0;

    // [background]
    int bg_close_width = 21;
    int bg_close_height = 21;
    double bg_min_area_frac = 0.02;
    int bg_max_paintings = 3;

    // [textbox]
    int tb_hat_size = 41;
    int tb_close_width = 31;
    int tb_close_height = 9;
    double tb_score_ceiling = 0.5;
    double tb_weight_center_x = 1.0;
    double tb_weight_center_y = 1.0;
    double tb_weight_symmetry = 1.0;
    double tb_weight_edges = 1.0;
    double tb_weight_aspect = 1.0;
    int tb_max_candidates = 8;

    // [noise]
    int noise_median_radius = 1;
    double psnr_threshold = 30.0;

    // [rotation]
    bool rot_median_prefilter = true;
    double hough_rho_step = 1.0;
    double hough_theta_step_deg = 0.5;
    int hough_vote_threshold = 60;
    int hough_max_lines = 25;
    double mad_multiplier = 2.5;

    // [descriptors]
    std::vector<std::string> active = {"color3d", "block", "hog"};
    bool index_features = true;
    int gray_bins = 256;
    int color3d_bins = 8;
    std::string color3d_space = "RGB";
    int block_grid = 16;
    std::string block_type = "color3d";  // color3d | gray1d
    int block_bins = 4;
    std::vector<int> multires_levels = {1, 4, 8, 16};
    int lbp_grid = 8;
    int dct_keep = 16;
    int analysis_size = 256;
    int hog_cell = 8;
    int hog_block_cells = 2;
    int hog_bins = 9;

    // [metrics]
    std::string color_metric = "hellinger";
    std::string texture_metric = "hellinger";

    // [combine]
    double weight_color = 0.3;
    double weight_texture = 0.5;
    double weight_text = 0.2;

    // [orb]
    features::OrbParams orb;

    // [index]
    std::string on_unreadable = "abort";  // abort | skip

    // [run]
    int jobs = 1;
    std::uint64_t seed = 1;

    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig from_string(const std::string& text);
    void validate() const;

    // 64-bit FNV-1a over every descriptor-affecting parameter; persisted in
    // the index header so stale indexes are refused.
    std::uint64_t descriptor_fingerprint() const;

    metrics::MeasureKind color_measure() const;
    metrics::MeasureKind texture_measure() const;
    ColorSpace color3d_colorspace() const;
    descriptors::BlockSpec block_spec() const;
    descriptors::HogParams hog_params() const;
};

ColorSpace colorspace_from_string(const std::string& name);

}  // namespace museo

#endif
