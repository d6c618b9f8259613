/******************************************************************************
 * Copyright 2026 The pwica Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/
#include "pwica/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <png.h>

#include "pwica/error.hpp"
#include "pwica/serialize.hpp"

namespace pwica {

namespace fs = std::filesystem;

namespace {

constexpr int kFormatVersion = 1;

std::uint32_t to_little(std::uint32_t v)
{
	if constexpr (std::endian::native == std::endian::big)
		return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
	return v;
}

std::string read_text(const fs::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		fail(ErrorCode::io, "cannot open " + path.string());
	std::ostringstream os;
	os << in.rdbuf();
	return os.str();
}

void write_text(const fs::path& path, const std::string& text)
{
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out)
		fail(ErrorCode::io, "cannot create " + path.string());
	out.write(text.data(), static_cast<std::streamsize>(text.size()));
	out.close();
	if (!out)
		fail(ErrorCode::io, "write failed for " + path.string());
}

std::uint8_t gray_level(double db, double dynamic_range)
{
	const double t = std::clamp((db + dynamic_range) / dynamic_range, 0.0, 1.0);
	return static_cast<std::uint8_t>(std::lround(255.0 * t));
}

} // namespace

nlohmann::json metadata_json(const Dataset& ds)
{
	const auto& acq = ds.acquisition;
	nlohmann::json j;
	j["format"] = {
		{"name", "pwica-native"},
		{"version", kFormatVersion},
		{"channel_file", kChannelFile},
		{"sample_type", "float32"},
		{"byte_order", "little"},
		{"layout", {"angle", "element", "sample"}},
	};
	j["units"] = {
		{"length", "m"}, {"time", "s"}, {"frequency", "Hz"},
		{"angle", "rad"}, {"speed", "m/s"},
	};
	j["name"] = ds.name;
	j["layout"] = ds.layout;
	j["seed"] = ds.seed;
	j["center_frequency"] = ds.center_frequency;
	j["probe"] = ds.probe;
	j["acquisition"] = {
		{"angles", acq.angles},
		{"n_elements", acq.n_elements},
		{"n_samples", acq.n_samples},
		{"sampling_rate", acq.sampling_rate},
		{"sound_speed", acq.sound_speed},
		{"start_time", acq.start_time},
	};
	j["grid"] = ds.grid;
	j["point_targets"] = ds.point_targets;
	j["cysts"] = ds.cysts;
	return j;
}

void write_native(const Dataset& dataset, const fs::path& dir)
{
	validate(dataset);
	std::error_code ec;
	fs::create_directories(dir, ec);
	if (ec)
		fail(ErrorCode::io, "cannot create directory " + dir.string() + ": " + ec.message());

	write_text(dir / kMetadataFile, metadata_json(dataset).dump(2) + "\n");

	const auto& samples = dataset.acquisition.samples;
	std::vector<std::uint32_t> blob(samples.size());
	for (std::size_t i = 0; i < samples.size(); ++i)
		blob[i] = to_little(std::bit_cast<std::uint32_t>(static_cast<float>(samples[i])));
	std::ofstream out(dir / kChannelFile, std::ios::binary | std::ios::trunc);
	if (!out)
		fail(ErrorCode::io, "cannot create " + (dir / kChannelFile).string());
	out.write(reinterpret_cast<const char*>(blob.data()),
			static_cast<std::streamsize>(blob.size() * sizeof(std::uint32_t)));
	out.close();
	if (!out)
		fail(ErrorCode::io, "write failed for " + (dir / kChannelFile).string());
}

Dataset read_native(const fs::path& dir)
{
	const fs::path meta_path = dir / kMetadataFile;
	const fs::path blob_path = dir / kChannelFile;
	if (!fs::exists(meta_path))
		fail(ErrorCode::io, "native dataset: missing " + meta_path.string());
	if (!fs::exists(blob_path))
		fail(ErrorCode::io, "native dataset: missing " + blob_path.string());

	Dataset ds;
	try {
		const auto j = nlohmann::json::parse(read_text(meta_path));
		const auto& f = j.at("format");
		if (f.at("sample_type").get<std::string>() != "float32"
				|| f.at("byte_order").get<std::string>() != "little")
			fail(ErrorCode::format, "native dataset: unsupported sample encoding");
		ds.name = j.value("name", std::string{});
		ds.layout = j.value("layout", std::string{});
		ds.seed = j.value("seed", std::uint64_t{0});
		ds.center_frequency = j.value("center_frequency", 0.0);
		j.at("probe").get_to(ds.probe);
		const auto& a = j.at("acquisition");
		a.at("angles").get_to(ds.acquisition.angles);
		a.at("n_elements").get_to(ds.acquisition.n_elements);
		a.at("n_samples").get_to(ds.acquisition.n_samples);
		a.at("sampling_rate").get_to(ds.acquisition.sampling_rate);
		a.at("sound_speed").get_to(ds.acquisition.sound_speed);
		a.at("start_time").get_to(ds.acquisition.start_time);
		j.at("grid").get_to(ds.grid);
		if (j.contains("point_targets"))
			j.at("point_targets").get_to(ds.point_targets);
		if (j.contains("cysts"))
			j.at("cysts").get_to(ds.cysts);
	} catch (const nlohmann::json::exception& e) {
		fail(ErrorCode::format, "native dataset: bad metadata in " + meta_path.string() + ": " + e.what());
	}

	auto& acq = ds.acquisition;
	const std::size_t count = acq.n_angles() * acq.n_elements * acq.n_samples;
	const auto bytes = fs::file_size(blob_path);
	if (bytes != count * sizeof(float)) {
		std::ostringstream os;
		os << "native dataset: " << blob_path.string() << " holds " << bytes << " bytes, expected "
		   << count * sizeof(float) << " (" << acq.n_angles() << " angles x " << acq.n_elements
		   << " elements x " << acq.n_samples << " samples x 4)";
		fail(ErrorCode::format, os.str());
	}
	std::vector<std::uint32_t> blob(count);
	std::ifstream in(blob_path, std::ios::binary);
	in.read(reinterpret_cast<char*>(blob.data()), static_cast<std::streamsize>(bytes));
	if (!in)
		fail(ErrorCode::io, "native dataset: read failed for " + blob_path.string());
	acq.samples.resize(count);
	for (std::size_t i = 0; i < count; ++i)
		acq.samples[i] = std::bit_cast<float>(to_little(blob[i]));

	try {
		validate(ds);
	} catch (const Error& e) {
		fail(ErrorCode::format, std::string("native dataset: ") + e.what());
	}
	return ds;
}

ImageFormat image_format_for(const fs::path& path)
{
	std::string ext = path.extension().string();
	std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
	if (ext == ".pgm")
		return ImageFormat::pgm;
	if (ext == ".png")
		return ImageFormat::png;
	if (ext == ".csv")
		return ImageFormat::csv;
	fail(ErrorCode::invalid_argument, "image: unknown extension '" + ext + "' (expected .pgm, .png or .csv)");
}

namespace {

void write_pgm(const BModeImage& img, const fs::path& path)
{
	const std::size_t nx = img.grid.nx(), nz = img.grid.nz();
	std::string out = "P5\n" + std::to_string(nx) + " " + std::to_string(nz) + "\n255\n";
	out.reserve(out.size() + nx * nz);
	for (double v : img.values)
		out.push_back(static_cast<char>(gray_level(v, img.dynamic_range)));
	write_text(path, out);
}

void write_png(const BModeImage& img, const fs::path& path)
{
	const std::size_t nx = img.grid.nx(), nz = img.grid.nz();
	std::FILE* fp = std::fopen(path.c_str(), "wb");
	if (!fp)
		fail(ErrorCode::io, "cannot create " + path.string());
	png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
	png_infop info = png ? png_create_info_struct(png) : nullptr;
	if (!png || !info) {
		png_destroy_write_struct(&png, nullptr);
		std::fclose(fp);
		fail(ErrorCode::internal, "png: cannot allocate encoder");
	}
	std::vector<std::uint8_t> row(nx);
	if (setjmp(png_jmpbuf(png))) {
		png_destroy_write_struct(&png, &info);
		std::fclose(fp);
		fail(ErrorCode::io, "png: encoding failed for " + path.string());
	}
	png_init_io(png, fp);
	png_set_IHDR(png, info, static_cast<png_uint_32>(nx), static_cast<png_uint_32>(nz), 8,
			PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
			PNG_FILTER_TYPE_DEFAULT);
	png_write_info(png, info);
	for (std::size_t iz = 0; iz < nz; ++iz) {
		for (std::size_t ix = 0; ix < nx; ++ix)
			row[ix] = gray_level(img.at(iz, ix), img.dynamic_range);
		png_write_row(png, row.data());
	}
	png_write_end(png, nullptr);
	png_destroy_write_struct(&png, &info);
	if (std::fclose(fp) != 0)
		fail(ErrorCode::io, "write failed for " + path.string());
}

std::string fmt(const char* spec, double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, spec, v);
	return buf;
}

void write_csv(const BModeImage& img, const fs::path& path)
{
	std::string out = "# dynamic_range_db=" + fmt("%.17g", img.dynamic_range) + "\n";
	out += "z_m\\x_m";
	for (double x : img.grid.x)
		out += "," + fmt("%.17g", x);
	out += "\n";
	for (std::size_t iz = 0; iz < img.grid.nz(); ++iz) {
		out += fmt("%.17g", img.grid.z[iz]);
		for (std::size_t ix = 0; ix < img.grid.nx(); ++ix)
			out += "," + fmt("%.6g", img.at(iz, ix));
		out += "\n";
	}
	write_text(path, out);
}

std::vector<double> split_numbers(const std::string& line, std::size_t skip, const fs::path& path)
{
	std::vector<double> v;
	std::stringstream ss(line);
	std::string cell;
	std::size_t k = 0;
	while (std::getline(ss, cell, ',')) {
		if (k++ < skip)
			continue;
		try {
			std::size_t used = 0;
			v.push_back(std::stod(cell, &used));
			if (cell.find_first_not_of(" \r", used) != std::string::npos)
				throw std::invalid_argument(cell);
		} catch (const std::exception&) {
			fail(ErrorCode::format, "image csv: bad number '" + cell + "' in " + path.string());
		}
	}
	return v;
}

} // namespace

void write_image(const BModeImage& image, const fs::path& path, ImageFormat format)
{
	require(image.values.size() == image.grid.size() && !image.values.empty(),
			"image: values do not match the grid");
	require(image.dynamic_range > 0.0, "image: dynamic range must be positive");
	switch (format) {
	case ImageFormat::pgm: write_pgm(image, path); break;
	case ImageFormat::png: write_png(image, path); break;
	case ImageFormat::csv: write_csv(image, path); break;
	}
}

BModeImage read_image_csv(const fs::path& path)
{
	std::istringstream in(read_text(path));
	BModeImage img;
	std::string line;
	if (!std::getline(in, line) || line.rfind("# dynamic_range_db=", 0) != 0)
		fail(ErrorCode::format, "image csv: missing dynamic range line in " + path.string());
	try {
		img.dynamic_range = std::stod(line.substr(std::strlen("# dynamic_range_db=")));
	} catch (const std::exception&) {
		fail(ErrorCode::format, "image csv: bad dynamic range in " + path.string());
	}
	if (!std::getline(in, line))
		fail(ErrorCode::format, "image csv: missing header row in " + path.string());
	img.grid.x = split_numbers(line, 1, path);
	while (std::getline(in, line)) {
		if (line.empty() || line == "\r")
			continue;
		auto row = split_numbers(line, 0, path);
		if (row.size() != img.grid.nx() + 1)
			fail(ErrorCode::format, "image csv: ragged row in " + path.string());
		img.grid.z.push_back(row[0]);
		img.values.insert(img.values.end(), row.begin() + 1, row.end());
	}
	if (img.grid.size() == 0)
		fail(ErrorCode::format, "image csv: no pixels in " + path.string());
	return img;
}

} // namespace pwica
