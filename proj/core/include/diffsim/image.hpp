#pragma once
#include <cstdint>
#include <vector>

namespace diffsim {

// Row-major image; (x, y) = (fast, slow).
template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, T fill = T{})
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    const T& at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t size() const { return data.size(); }

    bool operator==(const Image&) const = default;
};

using ImageF = Image<double>;
using ImageU8 = Image<std::uint8_t>;
using ImageU16 = Image<std::uint16_t>;

} // namespace diffsim
