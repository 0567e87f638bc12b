#pragma once
#include "diffsim/image.hpp"

namespace diffsim {

// Operations applied to real detector frames before classification so
// they resemble the synthetic renders: intensity normalization to a
// target mean, area downsampling, and a crop that removes the beamstop.

// Multiply by target_mean / mean(in) — the factor is computed on the raw
// values, before any clamping — then round half away from zero and clamp
// to 16-bit range.  A zero-mean (all-black) image is returned unchanged.
ImageU16 scale_to_mean(const ImageU16& in, double target_mean);

// Block-average by an integer factor; trailing rows/columns that do not
// fill a block are dropped.  Values rounded half away from zero.
ImageU16 downsample_area(const ImageU16& in, int factor);

// Copy the window starting at (x0, y0); throws if it leaves the frame.
ImageU16 crop_window(const ImageU16& in, int x0, int y0, int w, int h);

// scale -> downsample -> crop -> sqrt-compress, the full pipeline from
// raw 16-bit frame to classifier-ready 8-bit image.
ImageU8 preprocess_real(const ImageU16& in, double target_mean, int downsample,
                        int x0, int y0, int out_w, int out_h);

} // namespace diffsim
