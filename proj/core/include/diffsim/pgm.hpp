#pragma once
#include <string>

#include "diffsim/image.hpp"

namespace diffsim {

// Binary PGM (P5), maxval 255.  The writer emits the exact header
// "P5\n<width> <height>\n255\n"; the reader accepts any conforming
// whitespace and '#' comments.
void write_pgm(const std::string& path, const ImageU8& img);
ImageU8 read_pgm(const std::string& path);

// 16-bit variant (maxval 65535, big-endian samples) for raw detector
// frames entering the preprocessing pipeline.
void write_pgm16(const std::string& path, const ImageU16& img);
ImageU16 read_pgm16(const std::string& path);

} // namespace diffsim
