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
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <hdf5.h>

#include "pwica/error.hpp"
#include "pwica/io.hpp"

namespace pwica {

namespace fs = std::filesystem;

namespace {

constexpr const char* kRoot = "/US/US_DATASET0000";

struct Handle {
	hid_t id = H5I_INVALID_HID;
	herr_t (*close)(hid_t) = nullptr;
	Handle(hid_t h, herr_t (*c)(hid_t)) : id(h), close(c) {}
	Handle(const Handle&) = delete;
	Handle& operator=(const Handle&) = delete;
	~Handle()
	{
		if (id >= 0 && close)
			close(id);
	}
};

class H5File {
public:
	explicit H5File(const fs::path& path) : path_(path)
	{
		if (!fs::exists(path))
			fail(ErrorCode::io, "challenge: file not found: " + path.string());
		H5Eset_auto2(H5E_DEFAULT, nullptr, nullptr);
		id_ = H5Fopen(path.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT);
		if (id_ < 0)
			fail(ErrorCode::format, "challenge: " + path.string() + " is not a readable HDF5 file");
	}
	~H5File() { H5Fclose(id_); }
	H5File(const H5File&) = delete;
	H5File& operator=(const H5File&) = delete;

	bool has(const std::string& name) const
	{
		// check every prefix so missing intermediate groups do not raise
		std::size_t pos = 1;
		while (true) {
			pos = name.find('/', pos);
			const std::string prefix = name.substr(0, pos);
			if (H5Lexists(id_, prefix.c_str(), H5P_DEFAULT) <= 0)
				return false;
			if (pos == std::string::npos)
				return true;
			++pos;
		}
	}

	/// First dataset anywhere in the file whose link name is `leaf`.
	std::string find(const std::string& leaf) const
	{
		struct Ctx {
			std::string leaf;
			std::string hit;
		} ctx{leaf, {}};
		auto cb = [](hid_t, const char* name, const H5O_info_t* info, void* data) -> herr_t {
			auto* c = static_cast<Ctx*>(data);
			if (info->type != H5O_TYPE_DATASET)
				return 0;
			std::string n = name;
			const auto slash = n.rfind('/');
			if ((slash == std::string::npos ? n : n.substr(slash + 1)) == c->leaf) {
				c->hit = "/" + n;
				return 1;
			}
			return 0;
		};
		H5Ovisit2(id_, H5_INDEX_NAME, H5_ITER_INC, cb, &ctx, H5O_INFO_BASIC);
		return ctx.hit;
	}

	std::vector<double> read(const std::string& name, std::vector<hsize_t>* dims = nullptr) const
	{
		if (!has(name))
			fail(ErrorCode::format, "challenge: " + path_.string() + " lacks dataset " + name);
		Handle ds(H5Dopen2(id_, name.c_str(), H5P_DEFAULT), H5Dclose);
		if (ds.id < 0)
			fail(ErrorCode::format, "challenge: cannot open dataset " + name);
		Handle space(H5Dget_space(ds.id), H5Sclose);
		const int rank = H5Sget_simple_extent_ndims(space.id);
		if (rank < 0)
			fail(ErrorCode::format, "challenge: bad dataspace for " + name);
		std::vector<hsize_t> d(static_cast<std::size_t>(rank));
		H5Sget_simple_extent_dims(space.id, d.data(), nullptr);
		hsize_t n = 1;
		for (auto v : d)
			n *= v;
		std::vector<double> out(n);
		if (n > 0 && H5Dread(ds.id, H5T_NATIVE_DOUBLE, H5S_ALL, H5S_ALL, H5P_DEFAULT, out.data()) < 0)
			fail(ErrorCode::format, "challenge: read failed for " + name + " (file truncated or corrupt?)");
		if (dims)
			*dims = d;
		return out;
	}

	double scalar(const std::string& name) const
	{
		const auto v = read(name);
		if (v.empty())
			fail(ErrorCode::format, "challenge: dataset " + name + " is empty");
		return v[0];
	}

private:
	fs::path path_;
	hid_t id_ = H5I_INVALID_HID;
};

std::string join(const std::string& a, const char* b)
{
	return a + "/" + b;
}

/// Lateral element positions from a probe_geometry array stored either as
/// (3, n) or (n, 3) (x, y, z per element).
std::vector<double> element_positions(const std::vector<double>& g, const std::vector<hsize_t>& dims)
{
	if (dims.size() == 1)
		return g;
	if (dims.size() != 2)
		fail(ErrorCode::format, "challenge: probe_geometry must be 1-D or 2-D");
	const std::size_t r = dims[0], c = dims[1];
	std::vector<double> x;
	if (r <= 3 && c > 3) {
		x.assign(g.begin(), g.begin() + static_cast<long>(c));
	} else if (c <= 3 && r > 3) {
		for (std::size_t i = 0; i < r; ++i)
			x.push_back(g[i * c]);
	} else {
		fail(ErrorCode::format, "challenge: cannot identify the element axis of probe_geometry");
	}
	return x;
}

} // namespace

Dataset read_challenge_dataset(const ChallengeFiles& files)
{
	const H5File rf(files.rf);
	const std::string root = kRoot;
	if (!rf.has(root))
		fail(ErrorCode::format, "challenge: " + files.rf.string() + " has no group " + root);

	if (rf.has(join(root, "modulation_frequency"))) {
		const double fmod = rf.scalar(join(root, "modulation_frequency"));
		if (fmod != 0.0)
			fail(ErrorCode::format, "challenge: " + files.rf.string()
					+ " holds IQ data (modulation frequency " + std::to_string(fmod)
					+ " Hz); use the RF variant of the recording");
	}

	Dataset ds;
	ds.name = files.rf.stem().string();
	ds.layout = "challenge";
	auto& acq = ds.acquisition;
	acq.angles = rf.read(join(root, "angles"));
	acq.sampling_rate = rf.scalar(join(root, "sampling_frequency"));
	acq.sound_speed = rf.scalar(join(root, "sound_speed"));
	acq.start_time = rf.has(join(root, "initial_time")) ? rf.scalar(join(root, "initial_time")) : 0.0;

	std::vector<hsize_t> gdims;
	const auto geom = rf.read(join(root, "probe_geometry"), &gdims);
	ds.probe.element_x = element_positions(geom, gdims);
	if (ds.probe.element_x.size() < 2)
		fail(ErrorCode::format, "challenge: probe_geometry lists fewer than two elements");
	ds.probe.pitch = (ds.probe.element_x.back() - ds.probe.element_x.front())
			/ static_cast<double>(ds.probe.element_x.size() - 1);

	std::vector<hsize_t> ddims;
	const auto real = rf.read(join(root, "data/real"), &ddims);
	if (ddims.size() != 3)
		fail(ErrorCode::format, "challenge: data/real must be 3-D (angles, elements, samples)");
	const std::size_t na = acq.angles.size();
	const std::size_t ne = ds.probe.size();
	// axis roles by size: angles and elements are known, the rest is samples
	int ax_a = -1, ax_e = -1;
	for (int k = 0; k < 3; ++k)
		if (ax_a < 0 && ddims[k] == na)
			ax_a = k;
	for (int k = 0; k < 3; ++k)
		if (k != ax_a && ax_e < 0 && ddims[k] == ne)
			ax_e = k;
	if (ax_a < 0 || ax_e < 0) {
		std::ostringstream os;
		os << "challenge: data/real shape (" << ddims[0] << ", " << ddims[1] << ", " << ddims[2]
		   << ") does not match " << na << " angles and " << ne << " elements";
		fail(ErrorCode::format, os.str());
	}
	const int ax_s = 3 - ax_a - ax_e;
	acq.n_elements = ne;
	acq.n_samples = ddims[ax_s];
	acq.samples.resize(real.size());
	std::array<std::size_t, 3> stride{};
	stride[2] = 1;
	stride[1] = ddims[2];
	stride[0] = ddims[1] * ddims[2];
	for (std::size_t a = 0; a < na; ++a)
		for (std::size_t e = 0; e < ne; ++e) {
			auto dst = acq.trace(a, e);
			const std::size_t base = a * stride[ax_a] + e * stride[ax_e];
			for (std::size_t s = 0; s < acq.n_samples; ++s)
				dst[s] = real[base + s * stride[ax_s]];
		}

	const double lambda = rf.has(join(root, "transmit_frequency"))
			? acq.sound_speed / rf.scalar(join(root, "transmit_frequency"))
			: acq.sound_speed / 5.208e6;
	ds.center_frequency = acq.sound_speed / lambda;

	if (files.scan) {
		const H5File scan(*files.scan);
		const std::string xp = scan.find("x_axis");
		const std::string zp = scan.find("z_axis");
		if (xp.empty() || zp.empty())
			fail(ErrorCode::format, "challenge: scan file " + files.scan->string()
					+ " lacks x_axis / z_axis");
		ds.grid.x = scan.read(xp);
		ds.grid.z = scan.read(zp);
	} else {
		const double z_max = acq.sound_speed
				* (acq.start_time + static_cast<double>(acq.n_samples) / acq.sampling_rate) / 2.0;
		ds.grid = ImageGrid::uniform(ds.probe.element_x.front(), ds.probe.element_x.back(),
				lambda / 2.0, 5e-3, std::min(z_max, 50e-3), lambda / 4.0);
	}

	if (files.phantom) {
		const H5File ph(*files.phantom);
		const std::string px = ph.find("phantom_xPts");
		const std::string pz = ph.find("phantom_zPts");
		if (!px.empty() && !pz.empty()) {
			const auto xs = ph.read(px);
			const auto zs = ph.read(pz);
			if (xs.size() != zs.size())
				fail(ErrorCode::format, "challenge: phantom point coordinate lengths differ");
			for (std::size_t i = 0; i < xs.size(); ++i)
				ds.point_targets.push_back({xs[i], zs[i]});
		}
		const std::string cx = ph.find("phantom_occlusionCenterX");
		const std::string cz = ph.find("phantom_occlusionCenterZ");
		const std::string cd = ph.find("phantom_occlusionDiameter");
		if (!cx.empty() && !cz.empty() && !cd.empty()) {
			const auto xs = ph.read(cx);
			const auto zs = ph.read(cz);
			const auto diam = ph.read(cd);
			if (xs.size() != zs.size() || xs.size() != diam.size())
				fail(ErrorCode::format, "challenge: phantom occlusion arrays differ in length");
			for (std::size_t i = 0; i < xs.size(); ++i) {
				CystRegion c;
				c.center = {xs[i], zs[i]};
				c.radius = diam[i] / 2.0;
				c.inner_radius = 0.8 * c.radius;
				c.outer_min = 1.2 * c.radius;
				c.outer_max = 1.8 * c.radius;
				ds.cysts.push_back(c);
			}
		}
	}

	try {
		validate(ds);
	} catch (const Error& e) {
		fail(ErrorCode::format, std::string("challenge: ") + e.what());
	}
	return ds;
}

} // namespace pwica
