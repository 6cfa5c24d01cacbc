#include "ric/image.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ric {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then reads a decimal integer.
    std::size_t next_number(const char* field)
    {
        skip_blank();
        std::size_t value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            ++pos_;
            if (++digits > 9) {
                throw std::runtime_error(std::string("PGM: ") + field + " too large");
            }
        }
        if (digits == 0) {
            throw std::runtime_error(std::string("PGM: malformed header, expected ") + field);
        }
        return value;
    }

    // The single whitespace byte that separates the header from P5 data.
    void end_of_header()
    {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw std::runtime_error("PGM: malformed header, missing separator before pixel data");
        }
        ++pos_;
    }

    std::size_t position() const noexcept { return pos_; }

private:
    void skip_blank()
    {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 2;
};

std::string pgm_header(const char* magic, const GrayImage& img)
{
    std::ostringstream os;
    os << magic << '\n' << img.width << ' ' << img.height << "\n255\n";
    return os.str();
}

void check_gray_partition(const SubPartition& part)
{
    if (part.cells() != 256) {
        throw std::invalid_argument("quantization needs a partition of the 256 gray levels");
    }
}

} // namespace

GrayImage::GrayImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> px)
    : width(w), height(h), pixels(std::move(px))
{
    if (w == 0 || h == 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (pixels.size() != w * h) {
        throw std::invalid_argument("pixel count differs from width * height");
    }
}

GrayImage read_pgm(std::string_view bytes)
{
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
        throw std::runtime_error("PGM: expected P5 or P2 magic");
    }
    const bool binary = bytes[1] == '5';
    HeaderReader header(bytes);
    const std::size_t width = header.next_number("width");
    const std::size_t height = header.next_number("height");
    const std::size_t maxval = header.next_number("maxval");
    if (width == 0 || height == 0) {
        throw std::runtime_error("PGM: image dimensions must be positive");
    }
    if (maxval != 255) {
        std::ostringstream os;
        os << "PGM: unsupported maxval " << maxval << " (only 255 is supported)";
        throw std::runtime_error(os.str());
    }
    const std::size_t count = width * height;
    std::vector<std::uint8_t> pixels;
    pixels.reserve(count);
    if (binary) {
        header.end_of_header();
        const std::size_t start = header.position();
        if (bytes.size() - start < count) {
            std::ostringstream os;
            os << "PGM: truncated payload, expected " << count << " bytes, found " << bytes.size() - start;
            throw std::runtime_error(os.str());
        }
        for (std::size_t i = 0; i < count; ++i) {
            pixels.push_back(static_cast<std::uint8_t>(bytes[start + i]));
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t v = 0;
            try {
                v = header.next_number("pixel value");
            } catch (const std::runtime_error&) {
                std::ostringstream os;
                os << "PGM: truncated payload, expected " << count << " values, found " << i;
                throw std::runtime_error(os.str());
            }
            if (v > 255) {
                throw std::runtime_error("PGM: pixel value above maxval");
            }
            pixels.push_back(static_cast<std::uint8_t>(v));
        }
    }
    return GrayImage(width, height, std::move(pixels));
}

std::string write_pgm(const GrayImage& img)
{
    std::string out = pgm_header("P5", img);
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

std::string write_pgm_ascii(const GrayImage& img)
{
    std::string out = pgm_header("P2", img);
    for (std::size_t y = 0; y < img.height; ++y) {
        for (std::size_t x = 0; x < img.width; ++x) {
            if (x > 0) {
                out.push_back(' ');
            }
            out += std::to_string(img.pixels[y * img.width + x]);
        }
        out.push_back('\n');
    }
    return out;
}

BinnedSample gray_histogram(const GrayImage& img)
{
    std::vector<double> boundaries(257);
    for (std::size_t i = 0; i <= 256; ++i) {
        boundaries[i] = static_cast<double>(i);
    }
    std::vector<std::uint64_t> counts(256, 0);
    for (auto p : img.pixels) {
        ++counts[p];
    }
    return BinnedSample(CellGrid(std::move(boundaries)), std::move(counts));
}

Quantizer make_quantizer(const BinnedSample& gray_hist, const SubPartition& part)
{
    check_gray_partition(part);
    if (gray_hist.counts.size() != 256) {
        throw std::invalid_argument("quantization needs a 256-level histogram");
    }
    Quantizer q{part, {}, {}};
    const auto cuts = part.cuts();
    for (std::size_t j = 0; j < part.intervals(); ++j) {
        std::uint64_t total = 0;
        std::uint64_t weighted = 0;
        for (std::size_t level = cuts[j]; level < cuts[j + 1]; ++level) {
            total += gray_hist.counts[level];
            weighted += gray_hist.counts[level] * level;
        }
        // Round half up: floor((2·Σ c·level + total) / (2·total)). The
        // midpoint of levels a..b-1 is (a+b-1)/2, rounded half up to (a+b)/2.
        const std::uint64_t rep = total == 0 ? (cuts[j] + cuts[j + 1]) / 2
                                             : (2 * weighted + total) / (2 * total);
        q.levels.push_back(static_cast<std::uint8_t>(rep));
        for (std::size_t level = cuts[j]; level < cuts[j + 1]; ++level) {
            q.lut[level] = static_cast<std::uint8_t>(rep);
        }
    }
    return q;
}

GrayImage Quantizer::apply(const GrayImage& img) const
{
    GrayImage out = img;
    for (auto& p : out.pixels) {
        p = lut[p];
    }
    return out;
}

GrayImage quantize(const GrayImage& img, const SubPartition& part)
{
    return make_quantizer(gray_histogram(img), part).apply(img);
}

double psnr(const GrayImage& a, const GrayImage& b)
{
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("psnr: image dimensions differ");
    }
    std::uint64_t sse = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const int d = static_cast<int>(a.pixels[i]) - static_cast<int>(b.pixels[i]);
        sse += static_cast<std::uint64_t>(d * d);
    }
    if (sse == 0) {
        return kInfinitePsnr;
    }
    const double mse = static_cast<double>(sse) / static_cast<double>(a.pixels.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::size_t distinct_levels(const GrayImage& img)
{
    std::array<bool, 256> seen{};
    std::size_t count = 0;
    for (auto p : img.pixels) {
        if (!seen[p]) {
            seen[p] = true;
            ++count;
        }
    }
    return count;
}

std::string quantization_report_json(const Quantizer& q, double psnr_db)
{
    nlohmann::json j;
    j["m"] = q.partition.intervals();
    j["levels"] = q.levels;
    if (std::isfinite(psnr_db)) {
        j["psnr_db"] = psnr_db;
    } else {
        j["psnr_db"] = nullptr;
    }
    return j.dump(2);
}

} // namespace ric
