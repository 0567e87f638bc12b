#include "diffsim/pgm.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace diffsim {

void write_pgm(const std::string& path, const ImageU8& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write image: " + path);
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out)
        throw std::runtime_error("short write: " + path);
}

namespace {

// One PGM header token, skipping whitespace and '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty())
                return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

} // namespace

ImageU8 read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open image: " + path);
    if (next_token(in) != "P5")
        throw std::runtime_error("not a binary PGM: " + path);
    const int width = std::stoi(next_token(in));
    const int height = std::stoi(next_token(in));
    const int maxval = std::stoi(next_token(in));
    if (width <= 0 || height <= 0 || maxval != 255)
        throw std::runtime_error("unsupported PGM header: " + path);
    // The header terminates with exactly one whitespace byte, already
    // consumed by the tokenizer.
    ImageU8 img(width, height);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        throw std::runtime_error("truncated PGM data: " + path);
    return img;
}

void write_pgm16(const std::string& path, const ImageU16& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write image: " + path);
    out << "P5\n" << img.width << ' ' << img.height << "\n65535\n";
    std::vector<unsigned char> raw(img.data.size() * 2);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        raw[2 * i] = static_cast<unsigned char>(img.data[i] >> 8);
        raw[2 * i + 1] = static_cast<unsigned char>(img.data[i] & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
    if (!out)
        throw std::runtime_error("short write: " + path);
}

ImageU16 read_pgm16(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open image: " + path);
    if (next_token(in) != "P5")
        throw std::runtime_error("not a binary PGM: " + path);
    const int width = std::stoi(next_token(in));
    const int height = std::stoi(next_token(in));
    const int maxval = std::stoi(next_token(in));
    if (width <= 0 || height <= 0 || maxval < 256 || maxval > 65535)
        throw std::runtime_error("not a 16-bit PGM: " + path);
    ImageU16 img(width, height);
    std::vector<unsigned char> raw(img.data.size() * 2);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
        throw std::runtime_error("truncated PGM data: " + path);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        img.data[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    return img;
}

} // namespace diffsim
