#ifndef MUSEO_SYNTH_HPP
#define MUSEO_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "museo/raster.hpp"

namespace museo::synth {

// Which perturbations a generated query set carries.
struct Profile {
    std::string name = "ds1";
    int max_paintings = 1;
    bool text_boxes = false;
    bool noise = false;       // salt-and-pepper on a random subset
    bool hue_shift = false;   // color corruption on a random subset
    bool rotation = false;    // whole-scene rotation in [-30, 30] degrees
    bool unknowns = false;    // some paintings absent from the museum
};

Profile profile_from_string(const std::string& name);

struct PaintingTruth {
    int label = 0;  // -1 when the painting is not in the museum
    Box box;        // bounding box in the final scene
    std::optional<Box> text_box;
};

struct SceneTruth {
    std::string image_name;
    double angle_deg = 0.0;
    bool noisy = false;
    bool hue_shifted = false;
    std::vector<PaintingTruth> paintings;  // left to right
};

struct GeneratorOptions {
    int museum_size = 30;
    int scene_count = 30;
    int scene_width = 640;
    int scene_height = 420;
    std::uint64_t seed = 1;
    Profile profile;
    int twin_pairs = 4;  // museum paintings sharing an exact color multiset
};

// Procedural painting, deterministic in (seed, painting_id). Paintings with
// id < 2*twin_pairs come in pairs sharing a color multiset with permuted
// layout. Ids >= kUnknownBase are out-of-museum paintings.
RasterImage render_painting(std::uint64_t seed, int painting_id, int twin_pairs);

constexpr int kUnknownBase = 100000;

// Writes museum_<label>.png files plus catalog.tsv (label, author, title).
void generate_museum(const std::filesystem::path& dir, const GeneratorOptions& opts);

struct SceneRender {
    RasterImage image;
    BinaryMask union_mask;
    std::vector<BinaryMask> painting_masks;
    SceneTruth truth;
    std::string ocr_text;  // first painting's author ("" when no text boxes)
};

// One query scene; deterministic in (opts.seed, scene_index).
SceneRender render_scene(const GeneratorOptions& opts, int scene_index);

// Scenes, per-image masks, OCR sidecars and gt.json under `dir`.
void generate_dataset(const std::filesystem::path& dir, const GeneratorOptions& opts);

// Author pool used by generate_museum (shared by tests).
std::string author_for_label(int label);

// Salt-and-pepper corruption used by the ds3/ds4 profiles (density in [0,1]).
void salt_and_pepper(RasterImage& img, double density, std::uint64_t seed);

}  // namespace museo::synth

#endif
