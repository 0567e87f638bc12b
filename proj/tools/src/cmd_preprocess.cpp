#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>

#include "commands.hpp"
#include "diffsim/pgm.hpp"
#include "diffsim/preprocess.hpp"

namespace diffsim::cli {

namespace {

struct Options {
    std::string in;
    std::string out;
    double target_mean = 0.0;
    int downsample = 1;
    int crop_x = -1; // -1 = centered
    int crop_y = -1;
    int width = 512;
    int height = 512;
};

// Raw frames are 16-bit PGM; 8-bit inputs are accepted and widened.
ImageU16 read_frame(const std::string& path) {
    try {
        return read_pgm16(path);
    } catch (const std::exception&) {
    }
    const ImageU8 small = read_pgm(path);
    ImageU16 img(small.width, small.height);
    for (std::size_t i = 0; i < small.data.size(); ++i)
        img.data[i] = small.data[i];
    return img;
}

void run(const Options& opt) {
    const ImageU16 raw = read_frame(opt.in);
    if (opt.target_mean <= 0.0)
        throw std::runtime_error("--target-mean must be positive");

    const int ds_w = raw.width / opt.downsample;
    const int ds_h = raw.height / opt.downsample;
    const int x0 = opt.crop_x >= 0 ? opt.crop_x : (ds_w - opt.width) / 2;
    const int y0 = opt.crop_y >= 0 ? opt.crop_y : (ds_h - opt.height) / 2;

    const ImageU8 img = preprocess_real(raw, opt.target_mean, opt.downsample, x0,
                                        y0, opt.width, opt.height);
    write_pgm(opt.out, img);

    double mean = 0;
    for (auto v : img.data)
        mean += v;
    mean /= static_cast<double>(img.data.size());
    std::cout << "wrote " << img.width << 'x' << img.height << " (mean " << mean
              << ") to " << opt.out << '\n';
}

} // namespace

void setup_preprocess(CLI::App& app) {
    auto opt = std::make_shared<Options>();
    auto* cmd = app.add_subcommand(
        "preprocess",
        "Normalize, downsample and crop a real detector frame to classifier input");
    cmd->add_option("--in", opt->in, "Raw frame (16-bit or 8-bit PGM)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opt->out, "Output 8-bit PGM")->required();
    cmd->add_option("--target-mean", opt->target_mean,
                    "Scale so the pre-crop mean matches this value")
        ->required();
    cmd->add_option("--downsample", opt->downsample, "Integer block-average factor")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--crop-x", opt->crop_x,
                    "Crop origin x after downsampling (-1 = centered)");
    cmd->add_option("--crop-y", opt->crop_y,
                    "Crop origin y after downsampling (-1 = centered)");
    cmd->add_option("--width", opt->width, "Crop width")->check(CLI::PositiveNumber);
    cmd->add_option("--height", opt->height, "Crop height")
        ->check(CLI::PositiveNumber);
    cmd->callback([opt] { run(*opt); });
}

} // namespace diffsim::cli
