#include "diffsim/features/extractor.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "diffsim/pgm.hpp"

namespace diffsim {

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string radius_str(double r) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", r);
    return buf;
}

} // namespace

std::string ExtractorConfig::schema_id() const {
    if (kind == ExtractorKind::kGlcm)
        return "glcm:d=" + join_ints(glcm.distances) + ":a=" +
               join_ints(glcm.angles_deg) + ":levels=" + std::to_string(glcm.levels);
    return "lbp:p=" + std::to_string(lbp.points) + ":r=" + radius_str(lbp.radius);
}

std::vector<std::string> ExtractorConfig::feature_names() const {
    std::vector<std::string> names;
    if (kind == ExtractorKind::kGlcm) {
        static constexpr const char* kStat[6] = {"contrast",  "dissimilarity",
                                                 "homogeneity", "asm",
                                                 "energy",    "correlation"};
        for (int d : glcm.distances)
            for (int a : glcm.angles_deg)
                for (const char* s : kStat)
                    names.push_back("glcm_d" + std::to_string(d) + "_a" +
                                    std::to_string(a) + "_" + s);
    } else {
        for (int i = 0; i < lbp.points + 2; ++i)
            names.push_back("lbp_p" + std::to_string(lbp.points) + "_r" +
                            radius_str(lbp.radius) + "_bin" + std::to_string(i));
    }
    return names;
}

FeatureVector extract_features(const ImageU8& img, const ExtractorConfig& cfg) {
    FeatureVector out;
    out.schema_id = cfg.schema_id();
    if (cfg.kind == ExtractorKind::kGlcm) {
        out.values.reserve(6 * cfg.glcm.distances.size() * cfg.glcm.angles_deg.size());
        for (int d : cfg.glcm.distances)
            for (int a : cfg.glcm.angles_deg) {
                const auto mat = glcm_matrix(img, d, a, cfg.glcm.levels,
                                             cfg.glcm.symmetric, cfg.glcm.normalized);
                const HaralickFeatures f = haralick(mat, cfg.glcm.levels);
                out.values.push_back(f.contrast);
                out.values.push_back(f.dissimilarity);
                out.values.push_back(f.homogeneity);
                out.values.push_back(f.angular_second_moment);
                out.values.push_back(f.energy);
                out.values.push_back(f.correlation);
            }
    } else {
        out.values = lbp_histogram(img, cfg.lbp);
    }
    return out;
}

FeatureTable FeatureTable::filter_split(const std::string& split) const {
    FeatureTable out;
    out.feature_names = feature_names;
    for (std::size_t i = 0; i < rows(); ++i)
        if (splits[i] == split) {
            out.x.push_back(x[i]);
            out.labels.push_back(labels[i]);
            out.splits.push_back(splits[i]);
        }
    return out;
}

void write_feature_csv(const std::string& path, const FeatureTable& table) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write features: " + path);
    for (const auto& name : table.feature_names)
        out << name << ',';
    out << "label,split\n";
    char buf[40];
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (const double v : table.x[i]) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << buf << ',';
        }
        out << table.labels[i] << ',' << table.splits[i] << '\n';
    }
}

FeatureTable read_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open features: " + path);
    FeatureTable table;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty feature file: " + path);
    std::stringstream header(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(header, col, ','))
        cols.push_back(col);
    if (cols.size() < 3 || cols[cols.size() - 2] != "label" || cols.back() != "split")
        throw std::runtime_error("feature header must end with label,split");
    table.feature_names.assign(cols.begin(), cols.end() - 2);

    const std::size_t n_features = table.feature_names.size();
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream row(line);
        std::vector<double> values;
        values.reserve(n_features);
        std::string cell;
        for (std::size_t i = 0; i < n_features; ++i) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error("short feature row in " + path);
            values.push_back(std::stod(cell));
        }
        std::string label, split;
        if (!std::getline(row, label, ',') || !std::getline(row, split, ','))
            throw std::runtime_error("feature row missing label/split in " + path);
        table.x.push_back(std::move(values));
        table.labels.push_back(label);
        table.splits.push_back(split);
    }
    return table;
}

FeatureTable extract_dataset_features(const std::string& dataset_dir,
                                      const std::vector<ManifestEntry>& entries,
                                      const ExtractorConfig& cfg, int threads) {
    FeatureTable table;
    table.feature_names = cfg.feature_names();
    table.x.resize(entries.size());
    table.labels.resize(entries.size());
    table.splits.resize(entries.size());

    if (threads < 1)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1)
        threads = 1;

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= entries.size())
                return;
            try {
                const auto img = read_pgm(
                    (std::filesystem::path(dataset_dir) / entries[i].file).string());
                table.x[i] = extract_features(img, cfg).values;
                table.labels[i] = entries[i].label;
                table.splits[i] = entries[i].split;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
    return table;
}

} // namespace diffsim
