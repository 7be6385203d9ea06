#include "fanoband/raster.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace fanoband {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw IoError("descriptor: bad integer for '" + std::string(key) + "': " + std::string(value));
  return out;
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

// Position of sample (b, r, c) within the file for the given layout.
std::size_t file_offset(const RasterDescriptor& d, std::size_t b, std::size_t r, std::size_t c) {
  switch (d.interleave) {
    case Interleave::Bsq: return (b * d.rows + r) * d.cols + c;
    case Interleave::Bil: return (r * d.bands + b) * d.cols + c;
    case Interleave::Bip: return (r * d.cols + c) * d.bands + b;
  }
  return 0;
}

Sample decode(const unsigned char* p, const RasterDescriptor& d) {
  if (d.dtype == SampleType::U8) return p[0];
  return d.byte_order == ByteOrder::Little ? static_cast<Sample>(p[0] | (p[1] << 8))
                                           : static_cast<Sample>((p[0] << 8) | p[1]);
}

void encode(unsigned char* p, Sample v, const RasterDescriptor& d) {
  if (d.dtype == SampleType::U8) {
    p[0] = static_cast<unsigned char>(v);
  } else if (d.byte_order == ByteOrder::Little) {
    p[0] = static_cast<unsigned char>(v & 0xff);
    p[1] = static_cast<unsigned char>(v >> 8);
  } else {
    p[0] = static_cast<unsigned char>(v >> 8);
    p[1] = static_cast<unsigned char>(v & 0xff);
  }
}

// Decodes a file into band-major order.
std::vector<Sample> decode_raster(const std::filesystem::path& path, const RasterDescriptor& d) {
  const auto bytes = read_bytes(path);
  if (bytes.size() != d.file_size())
    throw IoError("file length does not match descriptor: " + path.string() + " has " +
                  std::to_string(bytes.size()) + " bytes, expected " + std::to_string(d.file_size()));
  const std::size_t w = d.sample_width();
  std::vector<Sample> out(d.bands * d.rows * d.cols);
  std::size_t i = 0;
  for (std::size_t b = 0; b < d.bands; ++b)
    for (std::size_t r = 0; r < d.rows; ++r)
      for (std::size_t c = 0; c < d.cols; ++c) out[i++] = decode(&bytes[file_offset(d, b, r, c) * w], d);
  return out;
}

void encode_raster(const std::filesystem::path& path, std::span<const Sample> band_major,
                   const RasterDescriptor& d) {
  const std::size_t w = d.sample_width();
  std::vector<unsigned char> bytes(d.file_size());
  std::size_t i = 0;
  for (std::size_t b = 0; b < d.bands; ++b)
    for (std::size_t r = 0; r < d.rows; ++r)
      for (std::size_t c = 0; c < d.cols; ++c) {
        const Sample v = band_major[i++];
        if (d.dtype == SampleType::U8 && v > 0xff)
          throw std::invalid_argument("value " + std::to_string(v) + " does not fit dtype u8");
        encode(&bytes[file_offset(d, b, r, c) * w], v, d);
      }
  write_bytes(path, bytes);
}

}  // namespace

Interleave parse_interleave(std::string_view s) {
  if (s == "bsq") return Interleave::Bsq;
  if (s == "bil") return Interleave::Bil;
  if (s == "bip") return Interleave::Bip;
  throw IoError("unknown interleave '" + std::string(s) + "' (expected bsq, bil or bip)");
}

std::string_view to_string(Interleave v) {
  switch (v) {
    case Interleave::Bsq: return "bsq";
    case Interleave::Bil: return "bil";
    case Interleave::Bip: return "bip";
  }
  return "?";
}

std::string_view to_string(SampleType v) { return v == SampleType::U8 ? "u8" : "u16"; }
std::string_view to_string(ByteOrder v) { return v == ByteOrder::Little ? "le" : "be"; }

RasterDescriptor parse_descriptor(std::string_view text) {
  RasterDescriptor d;
  bool have_rows = false;
  bool have_cols = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw IoError("descriptor line " + std::to_string(line_no) + ": expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "bands") {
      d.bands = parse_count(key, value);
    } else if (key == "rows") {
      d.rows = parse_count(key, value);
      have_rows = true;
    } else if (key == "cols") {
      d.cols = parse_count(key, value);
      have_cols = true;
    } else if (key == "dtype") {
      if (value == "u8") d.dtype = SampleType::U8;
      else if (value == "u16") d.dtype = SampleType::U16;
      else throw IoError("unknown dtype '" + std::string(value) + "' (expected u8 or u16)");
    } else if (key == "byteorder") {
      if (value == "le") d.byte_order = ByteOrder::Little;
      else if (value == "be") d.byte_order = ByteOrder::Big;
      else throw IoError("unknown byteorder '" + std::string(value) + "' (expected le or be)");
    } else if (key == "interleave") {
      d.interleave = parse_interleave(value);
    } else if (key == "classes") {
      d.classes = static_cast<int>(parse_count(key, value));
    } else {
      throw IoError("descriptor: unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_rows || !have_cols) throw IoError("descriptor must define rows and cols");
  if (d.bands == 0 || d.rows == 0 || d.cols == 0) throw IoError("descriptor dimensions must be positive");
  return d;
}

std::string format_descriptor(const RasterDescriptor& d) {
  std::ostringstream out;
  out << "bands=" << d.bands << '\n'
      << "rows=" << d.rows << '\n'
      << "cols=" << d.cols << '\n'
      << "dtype=" << to_string(d.dtype) << '\n'
      << "byteorder=" << to_string(d.byte_order) << '\n'
      << "interleave=" << to_string(d.interleave) << '\n';
  if (d.classes) out << "classes=" << *d.classes << '\n';
  return out.str();
}

std::filesystem::path descriptor_path(const std::filesystem::path& raster) {
  return std::filesystem::path(raster.string() + ".desc");
}

RasterDescriptor read_descriptor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open descriptor " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_descriptor(buf.str());
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_descriptor(const std::filesystem::path& path, const RasterDescriptor& d) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_descriptor(d);
  if (!out) throw IoError("write failed for " + path.string());
}

HyperCube load_cube(const std::filesystem::path& path, const RasterDescriptor& d) {
  return HyperCube(d.bands, d.rows, d.cols, decode_raster(path, d));
}

void save_cube(const std::filesystem::path& path, const HyperCube& cube, const RasterDescriptor& d) {
  if (d.bands != cube.bands() || d.rows != cube.rows() || d.cols != cube.cols())
    throw std::invalid_argument("descriptor dimensions do not match cube");
  encode_raster(path, cube.data(), d);
}

GroundTruth load_gt(const std::filesystem::path& path, const RasterDescriptor& d,
                    std::optional<int> n_classes) {
  if (d.bands != 1) throw IoError("ground truth descriptor must have bands=1");
  auto labels = decode_raster(path, d);
  return GroundTruth(d.rows, d.cols, std::move(labels), n_classes.value_or(d.classes.value_or(0)));
}

void save_gt(const std::filesystem::path& path, const GroundTruth& gt, const RasterDescriptor& d) {
  if (d.bands != 1 || d.rows != gt.rows() || d.cols != gt.cols())
    throw std::invalid_argument("descriptor dimensions do not match ground truth");
  encode_raster(path, gt.labels(), d);
}

HyperCube load_cube(const std::filesystem::path& path) {
  return load_cube(path, read_descriptor(descriptor_path(path)));
}

GroundTruth load_gt(const std::filesystem::path& path, std::optional<int> n_classes) {
  return load_gt(path, read_descriptor(descriptor_path(path)), n_classes);
}

void save_cube_with_descriptor(const std::filesystem::path& path, const HyperCube& cube,
                               const RasterDescriptor& d) {
  save_cube(path, cube, d);
  write_descriptor(descriptor_path(path), d);
}

void save_gt_with_descriptor(const std::filesystem::path& path, const GroundTruth& gt,
                             RasterDescriptor d) {
  d.bands = 1;
  d.rows = gt.rows();
  d.cols = gt.cols();
  d.interleave = Interleave::Bsq;
  d.classes = gt.n_classes();
  save_gt(path, gt, d);
  write_descriptor(descriptor_path(path), d);
}

}  // namespace fanoband
