#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>

#include "rggenv/errors.hpp"
#include "rggenv/experiment.hpp"

namespace rggenv {

namespace {

constexpr char kMagic[8] = {'R', 'G', 'G', 'E', 'N', 'V', 'C', '1'};

class ByteWriter {
public:
    template <class T>
    void put(const T& v) {
        const auto* p = reinterpret_cast<const unsigned char*>(&v);
        bytes.insert(bytes.end(), p, p + sizeof(T));
    }
    template <class T>
    void put_array(const std::vector<T>& v) {
        put<std::uint64_t>(v.size());
        const auto* p = reinterpret_cast<const unsigned char*>(v.data());
        bytes.insert(bytes.end(), p, p + v.size() * sizeof(T));
    }
    std::vector<unsigned char> bytes;
};

class ByteReader {
public:
    ByteReader(const std::vector<unsigned char>& b, std::size_t end) : bytes_(b), end_(end) {}

    template <class T>
    bool get(T& v) {
        if (pos_ + sizeof(T) > end_) return false;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return true;
    }
    template <class T>
    bool get_array(std::vector<T>& v) {
        std::uint64_t count = 0;
        if (!get(count) || count > (end_ - pos_) / sizeof(T)) return false;
        v.resize(count);
        std::memcpy(v.data(), bytes_.data() + pos_, count * sizeof(T));
        pos_ += count * sizeof(T);
        return true;
    }
    bool at_end() const { return pos_ == end_; }

private:
    const std::vector<unsigned char>& bytes_;
    std::size_t end_;
    std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t cache_key(const ExperimentConfig& config, const RunSpec& spec) {
    const std::int64_t schema = config.schema_version;
    const std::int64_t dim = config.dim;
    const std::uint64_t n = spec.params.n;
    const double r = spec.params.r;
    std::uint64_t h = fnv1a(&schema, sizeof schema);
    h = fnv1a(&dim, sizeof dim, h);
    h = fnv1a(&n, sizeof n, h);
    h = fnv1a(&spec.seed, sizeof spec.seed, h);
    h = fnv1a(&r, sizeof r, h);
    if (config.fixture_points)
        h = fnv1a(config.fixture_points->data(), config.fixture_points->size() * sizeof(double), h);
    return h;
}

std::filesystem::path cache_directory(const std::filesystem::path& out_dir) {
    if (const char* env = std::getenv("RGG_ENVELOPE_CACHE"); env && *env) return env;
    return out_dir / "cache";
}

std::filesystem::path cache_file(const std::filesystem::path& cache_dir, std::uint64_t key) {
    char name[40];
    std::snprintf(name, sizeof name, "graph-%016llx.bin", static_cast<unsigned long long>(key));
    return cache_dir / name;
}

std::vector<unsigned char> encode_graph_cache(const RunGraph& run, int schema_version) {
    ByteWriter w;
    for (char c : kMagic) w.put(c);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(schema_version));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(run.cloud.dim()));
    w.put<std::uint64_t>(run.cloud.size());
    w.put<std::uint64_t>(run.spec.seed);
    w.put<double>(run.graph.radius());
    w.put_array(run.cloud.coordinates());
    std::vector<std::uint64_t> offsets(run.graph.offsets().begin(), run.graph.offsets().end());
    w.put_array(offsets);
    w.put_array(run.graph.adjacency());
    w.put<std::uint64_t>(fnv1a(w.bytes.data(), w.bytes.size()));
    return std::move(w.bytes);
}

bool decode_graph_cache(const std::vector<unsigned char>& bytes, const RunSpec& spec, int dim,
                        int schema_version, RunGraph& run) {
    if (bytes.size() < sizeof kMagic + sizeof(std::uint64_t)) return false;
    const std::size_t body = bytes.size() - sizeof(std::uint64_t);
    std::uint64_t stored = 0;
    std::memcpy(&stored, bytes.data() + body, sizeof stored);
    if (stored != fnv1a(bytes.data(), body)) return false;

    ByteReader rd(bytes, body);
    char magic[8];
    for (char& c : magic)
        if (!rd.get(c)) return false;
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) return false;
    std::uint32_t version = 0, d = 0;
    std::uint64_t n = 0, seed = 0;
    double r = 0.0;
    if (!rd.get(version) || !rd.get(d) || !rd.get(n) || !rd.get(seed) || !rd.get(r)) return false;
    if (version != static_cast<std::uint32_t>(schema_version) || d != static_cast<std::uint32_t>(dim) ||
        n != spec.params.n || seed != spec.seed || r != spec.params.r)
        return false;
    std::vector<double> coords;
    std::vector<std::uint64_t> offsets;
    std::vector<Index> adjacency;
    if (!rd.get_array(coords) || !rd.get_array(offsets) || !rd.get_array(adjacency) || !rd.at_end())
        return false;
    if (coords.size() != n * d || offsets.size() != n + 1 || offsets.back() != adjacency.size()) return false;

    run.cloud = PointCloud::from_coordinates(static_cast<int>(d), std::move(coords), seed);
    run.graph = ProximityGraph(&run.cloud, r, std::vector<std::size_t>(offsets.begin(), offsets.end()),
                               std::move(adjacency));
    return true;
}

std::unique_ptr<RunGraph> load_or_build(const ExperimentConfig& config, const RunSpec& spec,
                                        const std::filesystem::path& cache_dir) {
    auto run = std::make_unique<RunGraph>();
    run->spec = spec;
    const auto path = cache_file(cache_dir, cache_key(config, spec));

    bool loaded = false;
    if (std::filesystem::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        loaded = decode_graph_cache(bytes, spec, config.dim, config.schema_version, *run);
        if (!loaded) run->warning = "cache file " + path.string() + " failed validation; rebuilding";
    }
    if (!loaded) {
        run->cloud = config.fixture_points
                         ? PointCloud::from_coordinates(config.dim, *config.fixture_points, spec.seed)
                         : sample_points(config.dim, spec.params.n, spec.seed);
        run->graph = build_graph(run->cloud, spec.params.r);
        std::error_code ec;
        std::filesystem::create_directories(cache_dir, ec);
        const auto bytes = encode_graph_cache(*run, config.schema_version);
        const auto tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error(ErrorKind::io, "cannot write cache file " + tmp);
            out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
            if (!out) throw Error(ErrorKind::io, "cannot write cache file " + tmp);
        }
        std::filesystem::rename(tmp, path);
    }
    run->cache_hit = loaded;
    run->classification = classify(run->graph, config.domain);
    return run;
}

}  // namespace rggenv
