#include "wiregraph/image_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "wiregraph/error.hpp"

namespace wiregraph {

GrayImage decode_gray(std::span<const std::uint8_t> bytes)
{
    if (bytes.empty())
        throw IoError("cannot decode image: empty buffer");
    const cv::Mat buf(1, int(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat decoded = cv::imdecode(buf, cv::IMREAD_UNCHANGED);
    if (decoded.empty())
        throw IoError("cannot decode image: unsupported or corrupt data");
    if (decoded.depth() == CV_16U)
        decoded.convertTo(decoded, CV_8U, 1.0 / 257.0);
    cv::Mat gray;
    switch (decoded.channels()) {
    case 1: gray = decoded; break;
    case 3: cv::cvtColor(decoded, gray, cv::COLOR_BGR2GRAY); break;
    case 4: cv::cvtColor(decoded, gray, cv::COLOR_BGRA2GRAY); break;
    default: throw IoError("cannot decode image: unsupported channel count");
    }
    GrayImage out(gray.cols, gray.rows);
    for (int y = 0; y < gray.rows; ++y)
        std::memcpy(&out.at(0, y), gray.ptr<std::uint8_t>(y), std::size_t(gray.cols));
    return out;
}

BitMap to_bitmap(const GrayImage& gray, int threshold, Polarity polarity)
{
    if (threshold < 0 || threshold > 255)
        throw ContractError("threshold must lie in [0,255]");
    BitMap map(gray.width, gray.height);
    for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
        const bool bright = gray.pixels[i] >= threshold;
        map.pixels[i] = (polarity == Polarity::BrightIsStroke) == bright ? 1 : 0;
    }
    return map;
}

BitMap load_bitmap(std::span<const std::uint8_t> bytes, int threshold, Polarity polarity)
{
    return to_bitmap(decode_gray(bytes), threshold, polarity);
}

namespace {

std::vector<std::uint8_t> encode_gray_bytes(int width, int height, const std::vector<std::uint8_t>& px)
{
    cv::Mat m(height, width, CV_8UC1, const_cast<std::uint8_t*>(px.data()));
    std::vector<std::uint8_t> out;
    if (!cv::imencode(".png", m, out))
        throw IoError("PNG encoding failed");
    return out;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const GrayImage& image)
{
    return encode_gray_bytes(image.width, image.height, image.pixels);
}

std::vector<std::uint8_t> encode_png(const BitMap& map)
{
    std::vector<std::uint8_t> px(map.pixels.size());
    for (std::size_t i = 0; i < px.size(); ++i)
        px[i] = map.pixels[i] ? 255 : 0;
    return encode_gray_bytes(map.width, map.height, px);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out.write(text.data(), std::streamsize(text.size()));
}

}  // namespace wiregraph
