#include "niah/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace niah {

void fill_rect(Image& img, const Rect& rect, Rgb color) {
    if (rect.w <= 0 || rect.h <= 0) return;
    if (rect.x < 0 || rect.y < 0 || rect.x + rect.w > img.width() || rect.y + rect.h > img.height()) {
        throw SpanOutOfRange("fill_rect: rect outside image");
    }
    img.r.block(rect.y, rect.x, rect.h, rect.w).setConstant(color.r);
    img.g.block(rect.y, rect.x, rect.h, rect.w).setConstant(color.g);
    img.b.block(rect.y, rect.x, rect.h, rect.w).setConstant(color.b);
}

Image scale_nearest(const Image& src, int width, int height) {
    Image out(width, height);
    for (int y = 0; y < height; ++y) {
        const int sy = std::min(static_cast<int>(static_cast<long long>(y) * src.height() / height),
                                src.height() - 1);
        for (int x = 0; x < width; ++x) {
            const int sx = std::min(static_cast<int>(static_cast<long long>(x) * src.width() / width),
                                    src.width() - 1);
            out.set(x, y, src.at(sx, sy));
        }
    }
    return out;
}

Image letterbox(const Image& src, int width, int height, Rgb background) {
    Image out(width, height, background);
    // Largest scaled size that fits, preserving aspect.
    long long sw = src.width(), sh = src.height();
    int tw = width, th = static_cast<int>(sh * width / sw);
    if (th > height) {
        th = height;
        tw = static_cast<int>(sw * height / sh);
    }
    tw = std::max(tw, 1);
    th = std::max(th, 1);
    const Image scaled = scale_nearest(src, tw, th);
    const int ox = (width - tw) / 2;
    const int oy = (height - th) / 2;
    out.r.block(oy, ox, th, tw) = scaled.r;
    out.g.block(oy, ox, th, tw) = scaled.g;
    out.b.block(oy, ox, th, tw) = scaled.b;
    return out;
}

void paste_scaled(Image& img, const Image& patch, const Rect& rect) {
    if (rect.w <= 0 || rect.h <= 0) return;
    if (rect.x < 0 || rect.y < 0 || rect.x + rect.w > img.width() || rect.y + rect.h > img.height()) {
        throw SpanOutOfRange("paste_scaled: rect outside image");
    }
    const Image scaled = scale_nearest(patch, rect.w, rect.h);
    img.r.block(rect.y, rect.x, rect.h, rect.w) = scaled.r;
    img.g.block(rect.y, rect.x, rect.h, rect.w) = scaled.g;
    img.b.block(rect.y, rect.x, rect.h, rect.w) = scaled.b;
}

Eigen::MatrixXf luma(const Image& img) {
    return 0.299f * img.r.cast<float>() + 0.587f * img.g.cast<float>() +
           0.114f * img.b.cast<float>();
}

Eigen::MatrixXf box_downsample(const Eigen::MatrixXf& m, int grid) {
    const int h = static_cast<int>(m.rows());
    const int w = static_cast<int>(m.cols());
    Eigen::MatrixXf out(grid, grid);
    for (int i = 0; i < grid; ++i) {
        int y0 = static_cast<int>(static_cast<long long>(i) * h / grid);
        int y1 = static_cast<int>(static_cast<long long>(i + 1) * h / grid);
        y0 = std::min(y0, h - 1);
        y1 = std::max(y1, y0 + 1);
        for (int j = 0; j < grid; ++j) {
            int x0 = static_cast<int>(static_cast<long long>(j) * w / grid);
            int x1 = static_cast<int>(static_cast<long long>(j + 1) * w / grid);
            x0 = std::min(x0, w - 1);
            x1 = std::max(x1, x0 + 1);
            out(i, j) = m.block(y0, x0, y1 - y0, x1 - x0).mean();
        }
    }
    return out;
}

std::size_t pixel_diff_count(const Image& a, const Image& b) {
    if (!a.same_size(b)) throw ResolutionMismatch("pixel_diff_count: sizes differ");
    std::size_t n = 0;
    for (int y = 0; y < a.height(); ++y) {
        for (int x = 0; x < a.width(); ++x) {
            if (a.r(y, x) != b.r(y, x) || a.g(y, x) != b.g(y, x) || a.b(y, x) != b.b(y, x)) ++n;
        }
    }
    return n;
}

void draw_disc(Image& img, int cx, int cy, int radius, Rgb color) {
    const long long r2 = static_cast<long long>(radius) * radius;
    const int y0 = std::max(0, cy - radius), y1 = std::min(img.height() - 1, cy + radius);
    const int x0 = std::max(0, cx - radius), x1 = std::min(img.width() - 1, cx + radius);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const long long dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r2) img.set(x, y, color);
        }
    }
}

void draw_ring(Image& img, int cx, int cy, int outer, int inner, Rgb color) {
    const long long o2 = static_cast<long long>(outer) * outer;
    const long long i2 = static_cast<long long>(inner) * inner;
    const int y0 = std::max(0, cy - outer), y1 = std::min(img.height() - 1, cy + outer);
    const int x0 = std::max(0, cx - outer), x1 = std::min(img.width() - 1, cx + outer);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const long long dx = x - cx, dy = y - cy;
            const long long d2 = dx * dx + dy * dy;
            if (d2 <= o2 && d2 >= i2) img.set(x, y, color);
        }
    }
}

void draw_triangle(Image& img, int cx, int cy, int half, Rgb color) {
    for (int dy = -half; dy <= half; ++dy) {
        // Width grows linearly from apex (top) to base (bottom).
        const int span = (dy + half) * half / std::max(1, 2 * half);
        const int y = cy + dy;
        if (y < 0 || y >= img.height()) continue;
        for (int dx = -span; dx <= span; ++dx) {
            const int x = cx + dx;
            if (x >= 0 && x < img.width()) img.set(x, y, color);
        }
    }
}

void draw_diamond(Image& img, int cx, int cy, int half, Rgb color) {
    for (int dy = -half; dy <= half; ++dy) {
        const int span = half - std::abs(dy);
        const int y = cy + dy;
        if (y < 0 || y >= img.height()) continue;
        for (int dx = -span; dx <= span; ++dx) {
            const int x = cx + dx;
            if (x >= 0 && x < img.width()) img.set(x, y, color);
        }
    }
}

}  // namespace niah
