#include "texref/image_io.hpp"

#include "texref/error.hpp"

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>

#include <jpeglib.h>
#include <png.h>

namespace texref {

namespace fs = std::filesystem;

RgbImage::RgbImage(int width, int height, Rgb fill)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

ChannelPlane::ChannelPlane(int width, int height, std::uint8_t fill)
    : width_(width), height_(height),
      values_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

namespace {

std::vector<unsigned char> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read image: " + path.string());
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorCode::Io, "cannot read image: " + path.string());
    }
    return bytes;
}

bool is_jpeg(const std::vector<unsigned char>& bytes) {
    return bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF;
}

bool is_png(const std::vector<unsigned char>& bytes) {
    return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// libjpeg reports fatal errors through longjmp. Nothing with a non-trivial
// destructor is created between setjmp and the libjpeg calls, and the raster
// is never read on the error path.
RgbImage decode_jpeg(const std::vector<unsigned char>& bytes, const fs::path& path) {
    jpeg_decompress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;

    RgbImage image;
    std::vector<unsigned char> row;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw Error(ErrorCode::UnsupportedFormat,
                    "cannot decode JPEG " + path.string() + ": " + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int width = static_cast<int>(cinfo.output_width);
    const int height = static_cast<int>(cinfo.output_height);
    if (cinfo.output_components != 3) {
        jpeg_destroy_decompress(&cinfo);
        throw Error(ErrorCode::UnsupportedFormat,
                    "unsupported JPEG color layout: " + path.string());
    }
    image = RgbImage(width, height);
    row.resize(static_cast<std::size_t>(width) * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        const int y = static_cast<int>(cinfo.output_scanline);
        JSAMPROW rows[1] = {row.data()};
        jpeg_read_scanlines(&cinfo, rows, 1);
        for (int x = 0; x < width; ++x) {
            const auto* p = &row[static_cast<std::size_t>(x) * 3];
            image.at(x, y) = Rgb{p[0], p[1], p[2]};
        }
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return image;
}

RgbImage decode_png(const std::vector<unsigned char>& bytes, const fs::path& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
        const std::string msg = png.message;
        png_image_free(&png);
        throw Error(ErrorCode::UnsupportedFormat, "cannot decode PNG " + path.string() + ": " + msg);
    }
    // Gray sources expand to R=G=B; alpha is discarded without compositing
    // against a background so the stored intensities are kept verbatim.
    png.format = PNG_FORMAT_RGB;
    std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
        const std::string msg = png.message;
        png_image_free(&png);
        throw Error(ErrorCode::UnsupportedFormat, "cannot decode PNG " + path.string() + ": " + msg);
    }
    const int width = static_cast<int>(png.width);
    const int height = static_cast<int>(png.height);
    RgbImage image(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const auto* p = &buffer[(static_cast<std::size_t>(y) * width + x) * 3];
            image.at(x, y) = Rgb{p[0], p[1], p[2]};
        }
    }
    return image;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

RgbImage load_image(const fs::path& path) {
    const auto bytes = read_file(path);
    RgbImage image;
    if (is_jpeg(bytes)) {
        image = decode_jpeg(bytes, path);
    } else if (is_png(bytes)) {
        image = decode_png(bytes, path);
    } else {
        throw Error(ErrorCode::UnsupportedFormat,
                    "unsupported format (JPEG or PNG expected): " + path.string());
    }
    if (image.width() < kMinImageSide || image.height() < kMinImageSide) {
        throw Error(ErrorCode::ImageTooSmall,
                    "image too small (" + std::to_string(image.width()) + "x" +
                        std::to_string(image.height()) + "): " + path.string());
    }
    return image;
}

ChannelPlanes split_channels(const RgbImage& image) {
    ChannelPlanes planes{ChannelPlane(image.width(), image.height()),
                         ChannelPlane(image.width(), image.height()),
                         ChannelPlane(image.width(), image.height())};
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            const Rgb& p = image.at(x, y);
            planes[0].at(x, y) = p.r;
            planes[1].at(x, y) = p.g;
            planes[2].at(x, y) = p.b;
        }
    }
    return planes;
}

RgbImage merge_channels(const ChannelPlanes& planes) {
    const int width = planes[0].width();
    const int height = planes[0].height();
    for (const auto& plane : planes) {
        if (plane.width() != width || plane.height() != height) {
            throw Error(ErrorCode::InvalidArgument, "channel planes differ in size");
        }
    }
    RgbImage image(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            image.at(x, y) = Rgb{planes[0].at(x, y), planes[1].at(x, y), planes[2].at(x, y)};
        }
    }
    return image;
}

std::string_view to_string(LabelingRule rule) {
    return rule == LabelingRule::Simplicity ? "simplicity" : "by-subdirectory";
}

LabelingRule parse_labeling(std::string_view text) {
    if (text == "simplicity") return LabelingRule::Simplicity;
    if (text == "by-subdirectory") return LabelingRule::BySubdirectory;
    throw Error(ErrorCode::InvalidArgument, "unknown labeling rule: " + std::string(text));
}

bool has_image_extension(const fs::path& path) {
    const std::string ext = lower(path.extension().string());
    return ext == ".jpg" || ext == ".jpeg" || ext == ".png";
}

namespace {

std::vector<fs::path> sorted_images_in(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && has_image_extension(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

bool parse_numeric_stem(const std::string& stem, std::uint32_t& out) {
    if (stem.empty() || stem.size() > 9) return false;
    std::uint32_t value = 0;
    for (char c : stem) {
        if (c < '0' || c > '9') return false;
        value = value * 10 + static_cast<std::uint32_t>(c - '0');
    }
    out = value;
    return true;
}

void scan_simplicity(const fs::path& root, DatasetManifest& manifest) {
    std::set<std::uint32_t> seen;
    for (const auto& file : sorted_images_in(root)) {
        std::uint32_t id = 0;
        if (!parse_numeric_stem(file.stem().string(), id)) {
            throw Error(ErrorCode::BadFilename,
                        "non-numeric filename under simplicity labeling: " + file.string());
        }
        if (!seen.insert(id).second) {
            throw Error(ErrorCode::DuplicateId,
                        "duplicate image id " + std::to_string(id) + ": " + file.string());
        }
        const std::uint32_t label = id / 100;
        if (label > 0xFFFF) {
            throw Error(ErrorCode::BadFilename, "image id out of range: " + file.string());
        }
        manifest.entries.push_back(ManifestEntry{
            id, file, fs::relative(file, root).generic_string(),
            static_cast<std::uint16_t>(label)});
    }
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.image_id < b.image_id; });
}

void scan_by_subdirectory(const fs::path& root, DatasetManifest& manifest) {
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    if (dirs.size() > 0xFFFF) {
        throw Error(ErrorCode::InvalidArgument, "too many class directories under " + root.string());
    }
    std::uint32_t next_id = 0;
    for (std::size_t label = 0; label < dirs.size(); ++label) {
        for (const auto& file : sorted_images_in(dirs[label])) {
            manifest.entries.push_back(ManifestEntry{
                next_id++, file, fs::relative(file, root).generic_string(),
                static_cast<std::uint16_t>(label)});
        }
    }
}

}  // namespace

DatasetManifest scan_dataset(const fs::path& root, LabelingRule labeling) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw Error(ErrorCode::Io, "dataset root is not a directory: " + root.string());
    }
    DatasetManifest manifest;
    manifest.root = root;
    manifest.labeling = labeling;
    if (labeling == LabelingRule::Simplicity) {
        scan_simplicity(root, manifest);
    } else {
        scan_by_subdirectory(root, manifest);
    }
    if (manifest.entries.empty()) {
        throw Error(ErrorCode::EmptyDataset, "no images found under " + root.string());
    }
    for (const auto& entry : manifest.entries) {
        ++manifest.class_counts[entry.class_label];
    }
    return manifest;
}

}  // namespace texref
