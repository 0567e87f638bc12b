#include "diffsim/crystal.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace diffsim {

Mat3 UnitCell::real_basis_A() const {
    const double d2r = M_PI / 180.0;
    const double ca = std::cos(alpha_deg * d2r);
    const double cb = std::cos(beta_deg * d2r);
    const double cg = std::cos(gamma_deg * d2r);
    const double sg = std::sin(gamma_deg * d2r);
    const Vec3 a{a_A, 0, 0};
    const Vec3 b{b_A * cg, b_A * sg, 0};
    const double cx = c_A * cb;
    const double cy = c_A * (ca - cb * cg) / sg;
    const double cz = std::sqrt(std::fmax(0.0, c_A * c_A - cx * cx - cy * cy));
    return Mat3::from_columns(a, b, {cx, cy, cz});
}

Mat3 UnitCell::reciprocal_basis_invA() const {
    // B = (A^T)^-1 so that B^T A = I.
    return real_basis_A().transpose().inverse();
}

double UnitCell::volume_A3() const {
    return real_basis_A().det();
}

double UnitCell::d_spacing_A(int h, int k, int l) const {
    const Vec3 g = reciprocal_basis_invA() *
                   Vec3{static_cast<double>(h), static_cast<double>(k),
                        static_cast<double>(l)};
    return 1.0 / g.norm();
}

namespace {

constexpr int kKeyBias = 512; // supports indices in [-512, 511]

std::uint64_t pack_canonical(int h, int k, int l) {
    // Friedel mate (-h,-k,-l) maps to the same key: flip so the first
    // nonzero index is positive.
    int first = h != 0 ? h : (k != 0 ? k : l);
    if (first < 0) {
        h = -h; k = -k; l = -l;
    }
    return (static_cast<std::uint64_t>(h + kKeyBias) << 20) |
           (static_cast<std::uint64_t>(k + kKeyBias) << 10) |
           static_cast<std::uint64_t>(l + kKeyBias);
}

} // namespace

void StructureFactorTable::set(int h, int k, int l, double f2) {
    map_[pack_canonical(h, k, l)] = f2;
}

double StructureFactorTable::f2(int h, int k, int l) const {
    const auto it = map_.find(pack_canonical(h, k, l));
    return it == map_.end() ? 0.0 : it->second;
}

void StructureFactorTable::unpack_key(std::uint64_t key, int& h, int& k, int& l) {
    h = static_cast<int>((key >> 20) & 0x3FF) - kKeyBias;
    k = static_cast<int>((key >> 10) & 0x3FF) - kKeyBias;
    l = static_cast<int>(key & 0x3FF) - kKeyBias;
}

StructureFactorTable synth_wilson_table(std::uint64_t seed, const UnitCell& cell,
                                        double d_min_A, double f2_scale,
                                        double wilson_b_A2) {
    StructureFactorTable table;
    Rng rng = Rng::from_words({seed, 0x57494C534F4EULL}); // "WILSON"
    // Conservative index bound: |h| <= a / d_min for each axis.
    const int hmax = static_cast<int>(std::ceil(cell.a_A / d_min_A));
    const int kmax = static_cast<int>(std::ceil(cell.b_A / d_min_A));
    const int lmax = static_cast<int>(std::ceil(cell.c_A / d_min_A));
    for (int h = 0; h <= hmax; ++h)
        for (int k = (h == 0 ? 0 : -kmax); k <= kmax; ++k)
            for (int l = ((h == 0 && k == 0) ? 1 : -lmax); l <= lmax; ++l) {
                const double d = cell.d_spacing_A(h, k, l);
                if (d < d_min_A)
                    continue;
                const double mean = f2_scale * std::exp(-wilson_b_A2 / (2.0 * d * d));
                const double u = rng.uniform();
                table.set(h, k, l, -mean * std::log(1.0 - u));
            }
    return table;
}

StructureFactorTable load_hkl(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open reflection file: " + path);
    StructureFactorTable table;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ss(line);
        int h, k, l;
        double f2;
        if (ss >> h >> k >> l >> f2)
            table.set(h, k, l, f2);
    }
    return table;
}

double sample_size_scale(Rng& rng, const CrystalModel& crystal) {
    const double lo = crystal.size_jitter_min;
    const double hi = crystal.size_jitter_max;
    if (!(lo > 0.0) || !(hi > 0.0))
        throw std::invalid_argument("size jitter bounds must be positive");
    if (lo >= hi)
        return lo;
    return lo * std::exp(rng.uniform() * std::log(hi / lo));
}

void save_hkl(const std::string& path, const StructureFactorTable& table) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write reflection file: " + path);
    for (const auto& [key, f2] : table.entries()) {
        int h, k, l;
        StructureFactorTable::unpack_key(key, h, k, l);
        out << h << ' ' << k << ' ' << l << ' ' << f2 << '\n';
    }
}

} // namespace diffsim
