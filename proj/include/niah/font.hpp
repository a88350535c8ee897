#pragma once

#include <string>

#include "niah/core.hpp"

namespace niah {

// Fixed 5x7 bitmap font. Rendering is a pure function of (text, scale,
// color, position) so composited frames are snapshot-stable everywhere.

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kGlyphAdvance = 6;  // 5px glyph + 1px spacing

struct TextMetrics {
    int width = 0;
    int height = 0;
};

TextMetrics measure_text(const std::string& text, int scale);

// Largest integer scale at which `text` fits in (max_w, max_h); 0 if even
// scale 1 does not fit.
int fit_text_scale(const std::string& text, int max_w, int max_h);

// Draws with the glyph's top-left at (x, y). Pixels falling outside the
// image are clipped.
void draw_text(Image& img, int x, int y, const std::string& text, int scale, Rgb color);

}  // namespace niah
