#include "museo/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace museo {

ColorSpace colorspace_from_string(const std::string& name) {
    std::string u = name;
    std::transform(u.begin(), u.end(), u.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (u == "GRAY") return ColorSpace::GRAY;
    if (u == "RGB") return ColorSpace::RGB;
    if (u == "LAB") return ColorSpace::LAB;
    if (u == "HSV") return ColorSpace::HSV;
    if (u == "YCRCB") return ColorSpace::YCRCB;
    throw ConfigError("unknown color space: " + name);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("expected boolean for " + key + ", got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        int r = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return r;
    } catch (const std::exception&) {
        throw ConfigError("expected integer for " + key + ", got '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return r;
    } catch (const std::exception&) {
        throw ConfigError("expected number for " + key + ", got '" + v + "'");
    }
}

std::string parse_string(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    return v;
}

std::vector<std::string> split_list(const std::string& v) {
    std::string inner = v;
    if (inner.size() >= 2 && inner.front() == '[' && inner.back() == ']')
        inner = inner.substr(1, inner.size() - 2);
    std::vector<std::string> out;
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_string(item));
    }
    return out;
}

}  // namespace

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
    RunConfig cfg;
    using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

#define SET_BOOL(field) [](RunConfig& c, const std::string& k, const std::string& v) { c.field = parse_bool(k, v); }
#define SET_INT(field) [](RunConfig& c, const std::string& k, const std::string& v) { c.field = parse_int(k, v); }
#define SET_DBL(field) [](RunConfig& c, const std::string& k, const std::string& v) { c.field = parse_double(k, v); }
#define SET_STR(field) [](RunConfig& c, const std::string&, const std::string& v) { c.field = parse_string(v); }

    static const std::map<std::string, Setter> setters = {
        {"pipeline.rotation_enabled", SET_BOOL(rotation_enabled)},
        {"pipeline.rotation_method", SET_STR(rotation_method)},
        {"pipeline.denoise_enabled", SET_BOOL(denoise_enabled)},
        {"pipeline.background_enabled", SET_BOOL(background_enabled)},
        {"pipeline.textbox_enabled", SET_BOOL(textbox_enabled)},
        {"canny.low", SET_DBL(canny_low)},
        {"canny.high", SET_DBL(canny_high)},
        {"background.close_width", SET_INT(bg_close_width)},
        {"background.close_height", SET_INT(bg_close_height)},
        {"background.min_area_frac", SET_DBL(bg_min_area_frac)},
        {"background.max_paintings", SET_INT(bg_max_paintings)},
        {"textbox.hat_size", SET_INT(tb_hat_size)},
        {"textbox.close_width", SET_INT(tb_close_width)},
        {"textbox.close_height", SET_INT(tb_close_height)},
        {"textbox.score_ceiling", SET_DBL(tb_score_ceiling)},
        {"textbox.weight_center_x", SET_DBL(tb_weight_center_x)},
        {"textbox.weight_center_y", SET_DBL(tb_weight_center_y)},
        {"textbox.weight_symmetry", SET_DBL(tb_weight_symmetry)},
        {"textbox.weight_edges", SET_DBL(tb_weight_edges)},
        {"textbox.weight_aspect", SET_DBL(tb_weight_aspect)},
        {"textbox.max_candidates", SET_INT(tb_max_candidates)},
        {"noise.median_radius", SET_INT(noise_median_radius)},
        {"noise.psnr_threshold", SET_DBL(psnr_threshold)},
        {"rotation.median_prefilter", SET_BOOL(rot_median_prefilter)},
        {"rotation.hough_rho_step", SET_DBL(hough_rho_step)},
        {"rotation.hough_theta_step_deg", SET_DBL(hough_theta_step_deg)},
        {"rotation.hough_vote_threshold", SET_INT(hough_vote_threshold)},
        {"rotation.hough_max_lines", SET_INT(hough_max_lines)},
        {"rotation.mad_multiplier", SET_DBL(mad_multiplier)},
        {"descriptors.active",
         [](RunConfig& c, const std::string&, const std::string& v) { c.active = split_list(v); }},
        {"descriptors.index_features", SET_BOOL(index_features)},
        {"descriptors.gray_bins", SET_INT(gray_bins)},
        {"descriptors.color3d_bins", SET_INT(color3d_bins)},
        {"descriptors.color3d_space", SET_STR(color3d_space)},
        {"descriptors.block_grid", SET_INT(block_grid)},
        {"descriptors.block_type", SET_STR(block_type)},
        {"descriptors.block_bins", SET_INT(block_bins)},
        {"descriptors.multires_levels",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.multires_levels.clear();
             for (const auto& item : split_list(v)) c.multires_levels.push_back(parse_int(k, item));
         }},
        {"descriptors.lbp_grid", SET_INT(lbp_grid)},
        {"descriptors.dct_keep", SET_INT(dct_keep)},
        {"descriptors.analysis_size", SET_INT(analysis_size)},
        {"descriptors.hog_cell", SET_INT(hog_cell)},
        {"descriptors.hog_block_cells", SET_INT(hog_block_cells)},
        {"descriptors.hog_bins", SET_INT(hog_bins)},
        {"metrics.color_metric", SET_STR(color_metric)},
        {"metrics.texture_metric", SET_STR(texture_metric)},
        {"combine.weight_color", SET_DBL(weight_color)},
        {"combine.weight_texture", SET_DBL(weight_texture)},
        {"combine.weight_text", SET_DBL(weight_text)},
        {"orb.fast_threshold", SET_INT(orb.fast_threshold)},
        {"orb.max_keypoints", SET_INT(orb.max_keypoints)},
        {"orb.pyramid_levels", SET_INT(orb.pyramid_levels)},
        {"orb.patch_radius", SET_INT(orb.patch_radius)},
        {"orb.match_max_distance", SET_INT(orb.match_max_distance)},
        {"orb.match_ratio", SET_DBL(orb.match_ratio)},
        {"orb.ratio_test", SET_BOOL(orb.ratio_test)},
        {"orb.min_matches", SET_INT(orb.min_matches)},
        {"index.on_unreadable", SET_STR(on_unreadable)},
        {"run.jobs", SET_INT(jobs)},
        {"run.seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.seed = static_cast<std::uint64_t>(parse_int(k, v));
         }},
    };

#undef SET_BOOL
#undef SET_INT
#undef SET_DBL
#undef SET_STR

    std::string section;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.find('.') == std::string::npos && !section.empty()) key = section + "." + key;
        auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("unknown config key: " + key);
        it->second(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("invalid config: " + what);
    };
    require(rotation_method == "rect" || rotation_method == "hough",
            "pipeline.rotation_method must be rect or hough");
    require(canny_low >= 0 && canny_low <= canny_high, "canny thresholds need 0 <= low <= high");
    require(bg_close_width >= 1 && bg_close_width % 2 == 1, "background.close_width odd >= 1");
    require(bg_close_height >= 1 && bg_close_height % 2 == 1, "background.close_height odd >= 1");
    require(bg_min_area_frac >= 0.0 && bg_min_area_frac < 1.0, "background.min_area_frac in [0,1)");
    require(bg_max_paintings >= 1 && bg_max_paintings <= 3, "background.max_paintings in [1,3]");
    require(tb_hat_size >= 3 && tb_hat_size % 2 == 1, "textbox.hat_size odd >= 3");
    require(tb_close_width >= 1 && tb_close_width % 2 == 1, "textbox.close_width odd >= 1");
    require(tb_close_height >= 1 && tb_close_height % 2 == 1, "textbox.close_height odd >= 1");
    require(tb_score_ceiling > 0.0, "textbox.score_ceiling must be positive");
    require(tb_max_candidates >= 1, "textbox.max_candidates >= 1");
    require(noise_median_radius >= 1, "noise.median_radius >= 1");
    require(hough_rho_step > 0.0, "rotation.hough_rho_step > 0");
    require(hough_theta_step_deg > 0.0, "rotation.hough_theta_step_deg > 0");
    require(hough_vote_threshold >= 1, "rotation.hough_vote_threshold >= 1");
    require(hough_max_lines >= 1, "rotation.hough_max_lines >= 1");
    require(mad_multiplier > 0.0, "rotation.mad_multiplier > 0");
    for (const auto& name : active) descriptors::kind_from_string(name);
    require(!active.empty(), "descriptors.active must not be empty");
    require(gray_bins >= 2 && gray_bins <= 256, "descriptors.gray_bins in [2,256]");
    require(color3d_bins >= 2 && color3d_bins <= 32, "descriptors.color3d_bins in [2,32]");
    colorspace_from_string(color3d_space);
    require(block_grid >= 1, "descriptors.block_grid >= 1");
    require(block_type == "color3d" || block_type == "gray1d",
            "descriptors.block_type must be color3d or gray1d");
    require(block_type == "gray1d" ? (block_bins >= 2 && block_bins <= 256)
                                   : (block_bins >= 2 && block_bins <= 32),
            "descriptors.block_bins out of range");
    require(!multires_levels.empty(), "descriptors.multires_levels must not be empty");
    for (int g : multires_levels) require(g >= 1, "multires level >= 1");
    require(lbp_grid >= 1, "descriptors.lbp_grid >= 1");
    require(dct_keep >= 1 && dct_keep <= 64, "descriptors.dct_keep in [1,64]");
    require(analysis_size >= 16 && analysis_size % 8 == 0,
            "descriptors.analysis_size must be a multiple of 8, >= 16");
    require(hog_cell >= 1 && analysis_size % hog_cell == 0,
            "descriptors.hog_cell must divide analysis_size");
    require(hog_block_cells >= 1, "descriptors.hog_block_cells >= 1");
    require(hog_bins >= 1, "descriptors.hog_bins >= 1");
    metrics::measure_from_string(color_metric);
    metrics::measure_from_string(texture_metric);
    require(weight_color >= 0 && weight_texture >= 0 && weight_text >= 0,
            "combine weights must be non-negative");
    require(weight_color + weight_texture + weight_text > 0, "some combine weight must be > 0");
    require(orb.fast_threshold >= 1, "orb.fast_threshold >= 1");
    require(orb.max_keypoints >= 1, "orb.max_keypoints >= 1");
    require(orb.pyramid_levels >= 1 && orb.pyramid_levels <= 8, "orb.pyramid_levels in [1,8]");
    require(orb.patch_radius >= 3, "orb.patch_radius >= 3");
    require(orb.match_max_distance >= 0 && orb.match_max_distance <= 256,
            "orb.match_max_distance in [0,256]");
    require(orb.match_ratio > 0.0 && orb.match_ratio <= 1.0, "orb.match_ratio in (0,1]");
    require(orb.min_matches >= 1, "orb.min_matches >= 1");
    require(on_unreadable == "abort" || on_unreadable == "skip",
            "index.on_unreadable must be abort or skip");
    require(jobs >= 1, "run.jobs >= 1");
}

std::uint64_t RunConfig::descriptor_fingerprint() const {
    std::ostringstream ss;
    ss << "gray_bins=" << gray_bins << ";color3d=" << color3d_space << ':' << color3d_bins
       << ";block=" << block_grid << ':' << block_type << ':' << block_bins << ";multires=";
    for (int g : multires_levels) ss << g << ',';
    ss << ";lbp=" << lbp_grid << ";dct=" << dct_keep << ";analysis=" << analysis_size
       << ";hog=" << hog_cell << ':' << hog_block_cells << ':' << hog_bins;
    for (const auto& a : active) ss << ";active=" << a;
    ss << ";features=" << (index_features ? 1 : 0);
    if (index_features)
        ss << ':' << orb.fast_threshold << ':' << orb.max_keypoints << ':' << orb.pyramid_levels
           << ':' << orb.patch_radius;

    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : ss.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

metrics::MeasureKind RunConfig::color_measure() const {
    return metrics::measure_from_string(color_metric);
}

metrics::MeasureKind RunConfig::texture_measure() const {
    return metrics::measure_from_string(texture_metric);
}

ColorSpace RunConfig::color3d_colorspace() const { return colorspace_from_string(color3d_space); }

descriptors::BlockSpec RunConfig::block_spec() const {
    descriptors::BlockSpec spec;
    spec.type = block_type == "gray1d" ? descriptors::BlockSpec::Type::GRAY_1D
                                       : descriptors::BlockSpec::Type::COLOR_3D;
    spec.space = ColorSpace::RGB;
    spec.bins = block_bins;
    return spec;
}

descriptors::HogParams RunConfig::hog_params() const {
    descriptors::HogParams p;
    p.cell = hog_cell;
    p.block_cells = hog_block_cells;
    p.bins = hog_bins;
    p.analysis_size = analysis_size;
    return p;
}

}  // namespace museo
