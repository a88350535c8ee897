#pragma once

#include <Eigen/Dense>

#include "niah/core.hpp"

namespace niah {

void fill_rect(Image& img, const Rect& rect, Rgb color);

// Nearest-neighbor resample to exactly (width, height).
Image scale_nearest(const Image& src, int width, int height);

// Scales `src` to fit (width, height) preserving aspect ratio, centered on
// a background fill. Deterministic: nearest-neighbor, integer arithmetic.
Image letterbox(const Image& src, int width, int height, Rgb background = {0, 0, 0});

// Pastes `patch` scaled into `rect` of `img`. Rect must be in bounds.
void paste_scaled(Image& img, const Image& patch, const Rect& rect);

// Rec.601 luma as floats in [0, 255].
Eigen::MatrixXf luma(const Image& img);

// Mean-pools `m` onto a grid x grid matrix (cells cover the image evenly).
Eigen::MatrixXf box_downsample(const Eigen::MatrixXf& m, int grid);

// Count of pixels that differ between two same-sized images.
std::size_t pixel_diff_count(const Image& a, const Image& b);

void draw_disc(Image& img, int cx, int cy, int radius, Rgb color);
void draw_ring(Image& img, int cx, int cy, int outer, int inner, Rgb color);
void draw_triangle(Image& img, int cx, int cy, int half, Rgb color);
void draw_diamond(Image& img, int cx, int cy, int half, Rgb color);

}  // namespace niah
