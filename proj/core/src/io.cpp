#include "fanbeam/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <tuple>
#include <vector>

#include <json.hpp>
#include <zlib.h>

namespace fanbeam {

namespace {

using nlohmann::json;

std::uint32_t payload_crc(const std::vector<double>& values) {
    uLong crc = crc32(0L, Z_NULL, 0);
    return static_cast<std::uint32_t>(
        crc32(crc, reinterpret_cast<const Bytef*>(values.data()),
              static_cast<uInt>(values.size() * sizeof(double))));
}

static_assert(std::endian::native == std::endian::little,
              "raster payloads are little-endian; add byte swapping for this host");

void write_payload(const std::string& path, const std::vector<double>& values) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw RasterError("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!f) throw RasterError("write failed: " + path);
}

void write_header(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw RasterError("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
    if (!f) throw RasterError("write failed: " + path);
}

json read_header(const std::string& path) {
    std::ifstream f(path + ".json");
    if (!f) throw RasterError("cannot open header: " + path + ".json");
    json j;
    f >> j;
    return j;
}

std::vector<double> read_payload(const std::string& path, const json& header) {
    if (header.at("dtype").get<std::string>() != "f64le")
        throw DtypeError("unknown dtype in " + path + ".json");
    const std::int64_t rows = header.at("rows").get<std::int64_t>();
    const std::int64_t cols = header.at("cols").get<std::int64_t>();
    if (rows < 1 || cols < 1)
        throw DimensionError("bad dimensions in " + path + ".json");

    std::ifstream f(path + ".bin", std::ios::binary | std::ios::ate);
    if (!f) throw RasterError("cannot open payload: " + path + ".bin");
    const auto bytes = static_cast<std::uint64_t>(f.tellg());
    if (bytes != static_cast<std::uint64_t>(rows) * cols * sizeof(double))
        throw ChecksumError("payload length does not match header dims: " + path);
    f.seekg(0);
    std::vector<double> values(static_cast<std::size_t>(rows * cols));
    f.read(reinterpret_cast<char*>(values.data()),
           static_cast<std::streamsize>(bytes));
    if (!f) throw RasterError("read failed: " + path + ".bin");
    if (payload_crc(values) != header.at("checksum").get<std::uint32_t>())
        throw ChecksumError("checksum mismatch: " + path);
    return values;
}

json geometry_to_json(const ScannerConfig& cfg, const GeometryParams& g) {
    return json{{"alpha0", g.first_angle},   {"r_D", g.det_radius},
                {"h_S", g.source_shift},     {"h_D", g.det_shift},
                {"alpha_D", g.det_tilt},     {"r_S", cfg.source_radius},
                {"n_D", cfg.det_count},      {"det_pixel_mm", cfg.det_pixel},
                {"n_angles", cfg.n_angles},  {"angular_span", cfg.angular_span}};
}

std::pair<ScannerConfig, GeometryParams> geometry_from_json(const json& j) {
    ScannerConfig cfg;
    GeometryParams g;
    g.first_angle = j.at("alpha0").get<double>();
    g.det_radius = j.at("r_D").get<double>();
    g.source_shift = j.at("h_S").get<double>();
    g.det_shift = j.at("h_D").get<double>();
    g.det_tilt = j.at("alpha_D").get<double>();
    cfg.source_radius = j.at("r_S").get<double>();
    cfg.det_count = j.at("n_D").get<int>();
    cfg.det_pixel = j.at("det_pixel_mm").get<double>();
    cfg.n_angles = j.at("n_angles").get<int>();
    cfg.angular_span = j.at("angular_span").get<double>();
    cfg.validate();
    g.validate();
    return {cfg, g};
}

} // namespace

void write_raster(const std::string& path, const ImageGrid& img) {
    img.validate();
    json header{{"kind", "image"},
                {"rows", img.n},
                {"cols", img.n},
                {"dtype", "f64le"},
                {"fov_mm", img.fov},
                {"checksum", payload_crc(img.values)}};
    write_payload(path + ".bin", img.values);
    write_header(path + ".json", header);
}

void write_raster(const std::string& path, const SinogramBundle& bundle) {
    const Sinogram& s = bundle.sino;
    if (s.values.size() != static_cast<std::size_t>(s.k) * s.m ||
        s.angles.size() != static_cast<std::size_t>(s.k))
        throw DimensionError("write_raster: inconsistent sinogram");
    json header{{"kind", "sinogram"},
                {"rows", s.k},
                {"cols", s.m},
                {"dtype", "f64le"},
                {"angles", s.angles},
                {"geometry", geometry_to_json(bundle.cfg, bundle.geom)},
                {"checksum", payload_crc(s.values)}};
    write_payload(path + ".bin", s.values);
    write_header(path + ".json", header);
}

std::string raster_kind(const std::string& path) {
    return read_header(path).at("kind").get<std::string>();
}

ImageGrid read_image_raster(const std::string& path) {
    const json header = read_header(path);
    if (header.at("kind").get<std::string>() != "image")
        throw DimensionError("not an image raster: " + path);
    const int rows = header.at("rows").get<int>();
    const int cols = header.at("cols").get<int>();
    if (rows != cols) throw DimensionError("image raster must be square: " + path);
    ImageGrid img;
    img.n = rows;
    img.fov = header.at("fov_mm").get<double>();
    img.values = read_payload(path, header);
    img.validate();
    return img;
}

SinogramBundle read_sinogram_raster(const std::string& path) {
    const json header = read_header(path);
    if (header.at("kind").get<std::string>() != "sinogram")
        throw DimensionError("not a sinogram raster: " + path);
    SinogramBundle bundle;
    bundle.sino.k = header.at("rows").get<int>();
    bundle.sino.m = header.at("cols").get<int>();
    bundle.sino.angles = header.at("angles").get<std::vector<double>>();
    if (bundle.sino.angles.size() != static_cast<std::size_t>(bundle.sino.k))
        throw DimensionError("angle list length mismatch: " + path);
    bundle.sino.values = read_payload(path, header);
    std::tie(bundle.cfg, bundle.geom) = geometry_from_json(header.at("geometry"));
    return bundle;
}

void export_pgm(const ImageGrid& img, const std::string& path) {
    img.validate();
    double lo = img.values[0], hi = img.values[0];
    for (double v : img.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw RasterError("cannot open for writing: " + path);
    f << "P5\n" << img.n << " " << img.n << "\n65535\n";
    const double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;
    std::vector<unsigned char> bytes(img.values.size() * 2);
    for (std::size_t i = 0; i < img.values.size(); ++i) {
        const std::uint16_t q =
            hi > lo ? static_cast<std::uint16_t>(
                          std::lround((img.values[i] - lo) * scale))
                    : static_cast<std::uint16_t>(32768);
        bytes[2 * i] = static_cast<unsigned char>(q >> 8); // PGM is big-endian
        bytes[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
    }
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw RasterError("write failed: " + path);
}

void write_geometry_json(const std::string& path, const ScannerConfig& cfg,
                         const GeometryParams& g) {
    std::ofstream f(path);
    if (!f) throw RasterError("cannot open for writing: " + path);
    f << geometry_to_json(cfg, g).dump(2) << "\n";
}

std::pair<ScannerConfig, GeometryParams> read_geometry_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw RasterError("cannot open geometry file: " + path);
    json j;
    f >> j;
    return geometry_from_json(j);
}

} // namespace fanbeam
