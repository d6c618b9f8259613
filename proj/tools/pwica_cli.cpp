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
 *
 * @file pwica_cli.cpp Command line front end. Talks to the library through
 * the C interface only.
 *
 *****************************************************************************/
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pwica/pwica.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

/// Failure of a library call or of the command itself.
struct CliError : std::runtime_error {
	int code;
	CliError(const std::string& what, int c) : std::runtime_error(what), code(c) {}
};

void check(pwica_status s, const std::string& context)
{
	if (s != PWICA_OK)
		throw CliError(context + ": " + pwica_last_error(), static_cast<int>(s) + 1);
}

struct DatasetDeleter {
	void operator()(pwica_dataset* p) const { pwica_dataset_free(p); }
};
struct ImageDeleter {
	void operator()(pwica_image* p) const { pwica_image_free(p); }
};
struct ProfileDeleter {
	void operator()(pwica_profile* p) const { pwica_profile_free(p); }
};
using DatasetPtr = std::unique_ptr<pwica_dataset, DatasetDeleter>;
using ImagePtr = std::unique_ptr<pwica_image, ImageDeleter>;
using ProfilePtr = std::unique_ptr<pwica_profile, ProfileDeleter>;

std::string num(double v)
{
	if (std::isnan(v))
		return "nan";
	if (std::isinf(v))
		return v > 0 ? "inf" : "-inf";
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.6g", v);
	return buf;
}

std::vector<std::string> split(const std::string& text, char sep)
{
	std::vector<std::string> out;
	std::stringstream ss(text);
	std::string item;
	while (std::getline(ss, item, sep))
		if (!item.empty())
			out.push_back(item);
	return out;
}

double parse_double(const std::string& s)
{
	if (s == "inf" || s == "+inf")
		return std::numeric_limits<double>::infinity();
	std::size_t used = 0;
	double v = 0.0;
	try {
		v = std::stod(s, &used);
	} catch (const std::exception&) {
		used = 0;
	}
	if (used != s.size())
		throw CliError("not a number: '" + s + "'", 1);
	return v;
}

std::size_t parse_size(const std::string& s)
{
	std::size_t used = 0;
	unsigned long long v = 0;
	try {
		v = std::stoull(s, &used);
	} catch (const std::exception&) {
		used = 0;
	}
	if (used != s.size() || s.empty() || s[0] == '-')
		throw CliError("not a non-negative integer: '" + s + "'", 1);
	return static_cast<std::size_t>(v);
}

void write_file(const fs::path& path, const std::string& text)
{
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out)
		throw CliError("cannot create " + path.string(), 3);
	out << text;
	out.close();
	if (!out)
		throw CliError("write failed for " + path.string(), 3);
}

void write_provenance(const fs::path& path, const ordered_json& record)
{
	write_file(path, record.dump(2) + "\n");
}

fs::path sidecar(const fs::path& output)
{
	return fs::path(output.string() + ".provenance.json");
}

// ---- shared option groups -------------------------------------------------

struct InputOptions {
	std::string path;
	std::string scan;
	std::string phantom;

	void add(CLI::App* app, const std::string& flag = "--in")
	{
		app->add_option(flag, path, "native dataset directory or challenge HDF5 file")->required();
		app->add_option("--scan", scan, "challenge scan file (x_axis / z_axis)");
		app->add_option("--phantom-file", phantom, "challenge phantom file (targets / occlusions)");
	}

	DatasetPtr open() const
	{
		pwica_dataset* ds = nullptr;
		if (fs::is_directory(path)) {
			if (!scan.empty() || !phantom.empty())
				throw CliError("--scan / --phantom-file only apply to challenge HDF5 input", 1);
			check(pwica_dataset_read_native(path.c_str(), &ds), "reading " + path);
		} else {
			check(pwica_dataset_read_challenge(path.c_str(), scan.empty() ? nullptr : scan.c_str(),
					phantom.empty() ? nullptr : phantom.c_str(), &ds), "reading " + path);
		}
		return DatasetPtr(ds);
	}

	ordered_json json() const
	{
		ordered_json j = {{"path", path}};
		if (!scan.empty())
			j["scan"] = scan;
		if (!phantom.empty())
			j["phantom_file"] = phantom;
		return j;
	}
};

struct BeamformOptions {
	double f_number = 0.0;
	std::string window;
	std::string interpolation = "linear";
	std::string mapping = "element";
	std::string observation = "full";
	double crop_depth = 0.0;
	bool per_angle_ica = false;
	bool allow_nonconverged = false;
	std::uint64_t ica_seed = 0;
	int max_iterations = 0;
	double epsilon = 0.0;
	std::string contrast = "logcosh";
	double a1 = 0.0;
	double dynamic_range = 0.0;

	BeamformOptions()
	{
		pwica_beamform_options o;
		pwica_beamform_options_init(&o);
		f_number = o.f_number;
		window = o.window;
		crop_depth = o.ica_crop_depth;
		ica_seed = o.ica_seed;
		max_iterations = o.ica_max_iterations;
		epsilon = o.ica_epsilon;
		a1 = o.ica_a1;
		dynamic_range = o.dynamic_range;
	}

	void add(CLI::App* app)
	{
		app->add_option("--f-number", f_number, "receive F-number")->capture_default_str();
		app->add_option("--window", window, "DAS window: boxcar, hann, tukey[:taper]")->capture_default_str();
		app->add_option("--interpolation", interpolation, "delay interpolation")
				->check(CLI::IsMember({"linear", "nearest"}))->capture_default_str();
		app->add_option("--profile-mapping", mapping, "how an estimated profile meets each aperture")
				->check(CLI::IsMember({"element", "resample", "centered"}))->capture_default_str();
		app->add_option("--observation", observation, "ICA observation rows: full or F-number masked")
				->check(CLI::IsMember({"full", "masked"}))->capture_default_str();
		app->add_option("--ica-crop-depth", crop_depth, "deepest cropped pixel for ICA [m], 0 = image bottom")
				->capture_default_str();
		app->add_flag("--per-angle-ica", per_angle_ica, "re-estimate the ICA profile for every angle");
		app->add_flag("--allow-nonconverged", allow_nonconverged, "use ICA profiles that did not converge");
		app->add_option("--ica-seed", ica_seed, "FastICA initialization seed")->capture_default_str();
		app->add_option("--max-iterations", max_iterations, "FastICA iteration cap")->capture_default_str();
		app->add_option("--epsilon", epsilon, "FastICA convergence threshold")->capture_default_str();
		app->add_option("--contrast", contrast, "negentropy contrast")
				->check(CLI::IsMember({"logcosh", "gauss"}))->capture_default_str();
		app->add_option("--a1", a1, "logcosh parameter in [1, 2]")->capture_default_str();
		app->add_option("--dynamic-range", dynamic_range, "B-mode dynamic range [dB]")->capture_default_str();
	}

	pwica_beamform_options c_options() const
	{
		pwica_beamform_options o;
		pwica_beamform_options_init(&o);
		o.f_number = f_number;
		if (window.size() >= sizeof o.window)
			throw CliError("--window: specification too long", 1);
		std::snprintf(o.window, sizeof o.window, "%s", window.c_str());
		o.linear_interpolation = interpolation == "linear";
		o.profile_mapping = mapping == "element" ? PWICA_MAPPING_ELEMENT
				: mapping == "resample" ? PWICA_MAPPING_RESAMPLE : PWICA_MAPPING_CENTERED;
		o.observation = observation == "full" ? PWICA_OBSERVATION_FULL : PWICA_OBSERVATION_MASKED;
		o.ica_crop_depth = crop_depth;
		o.reuse_zero_angle_profile = !per_angle_ica;
		o.allow_nonconverged = allow_nonconverged;
		o.ica_seed = ica_seed;
		o.ica_max_iterations = max_iterations;
		o.ica_epsilon = epsilon;
		o.ica_contrast = contrast == "logcosh" ? PWICA_CONTRAST_LOGCOSH : PWICA_CONTRAST_GAUSS;
		o.ica_a1 = a1;
		o.dynamic_range = dynamic_range;
		return o;
	}

	ordered_json json() const
	{
		return {
			{"f_number", f_number},
			{"window", window},
			{"interpolation", interpolation},
			{"profile_mapping", mapping},
			{"observation", observation},
			{"ica_crop_depth_m", crop_depth},
			{"per_angle_ica", per_angle_ica},
			{"allow_nonconverged", allow_nonconverged},
			{"ica_seed", ica_seed},
			{"ica_max_iterations", max_iterations},
			{"ica_epsilon", epsilon},
			{"ica_contrast", contrast},
			{"ica_a1", a1},
			{"dynamic_range_db", dynamic_range},
		};
	}
};

pwica_method parse_method(const std::string& m)
{
	if (m == "das")
		return PWICA_METHOD_DAS;
	if (m == "cf")
		return PWICA_METHOD_CF;
	if (m == "ica")
		return PWICA_METHOD_ICA;
	throw CliError("unknown method '" + m + "' (expected das, cf or ica)", 1);
}

std::vector<std::string> parse_methods(const std::string& list)
{
	auto out = split(list, ',');
	if (out.empty())
		throw CliError("--methods: empty list", 1);
	for (const auto& m : out)
		parse_method(m);
	return out;
}

std::vector<std::size_t> angle_subset(const pwica_dataset* ds, std::size_t count)
{
	std::size_t n = 0;
	check(pwica_dataset_angle_subset(ds, count, nullptr, 0, &n), "angle subset");
	std::vector<std::size_t> idx(n);
	check(pwica_dataset_angle_subset(ds, count, idx.data(), idx.size(), &n), "angle subset");
	return idx;
}

pwica_dataset_info info_of(const pwica_dataset* ds)
{
	pwica_dataset_info info;
	check(pwica_dataset_get_info(ds, &info), "dataset info");
	return info;
}

struct RunResult {
	ImagePtr image;
	ProfilePtr profile;
	pwica_profile_info profile_info{};
	bool has_profile = false;
};

RunResult run_method(const pwica_dataset* ds, const std::string& method,
		const std::vector<std::size_t>& angles, const BeamformOptions& opts)
{
	const auto o = opts.c_options();
	pwica_image* img = nullptr;
	pwica_profile* prof = nullptr;
	check(pwica_beamform(ds, parse_method(method), angles.data(), angles.size(), &o, &img, &prof),
			method + " beamforming");
	RunResult r;
	r.image.reset(img);
	r.profile.reset(prof);
	if (prof) {
		check(pwica_profile_get_info(prof, &r.profile_info), "profile info");
		r.has_profile = true;
	}
	return r;
}

std::string converged_field(const RunResult& r)
{
	return r.has_profile ? (r.profile_info.converged ? "1" : "0") : "na";
}

ordered_json ica_json(const RunResult& r)
{
	if (!r.has_profile)
		return nullptr;
	return {
		{"seed", r.profile_info.seed},
		{"converged", static_cast<bool>(r.profile_info.converged)},
		{"iterations_used", r.profile_info.iterations_used},
		{"estimation_angle_index", r.profile_info.estimation_angle},
	};
}

ordered_json dataset_json(const pwica_dataset* ds)
{
	const auto info = info_of(ds);
	return {
		{"name", pwica_dataset_name(ds)},
		{"layout", pwica_dataset_layout(ds)},
		{"seed", info.seed},
		{"n_angles", info.n_angles},
		{"n_elements", info.n_elements},
		{"n_samples", info.n_samples},
	};
}

ordered_json base_record(const std::string& command)
{
	return {{"tool", "pwica"}, {"version", pwica_version()}, {"command", command}};
}

std::string joined(const std::vector<std::size_t>& v, char sep)
{
	std::string s;
	for (std::size_t i = 0; i < v.size(); ++i) {
		if (i)
			s += sep;
		s += std::to_string(v[i]);
	}
	return s;
}

// ---- subcommands ------------------------------------------------------------

struct SimulateCmd {
	std::string phantom;
	std::uint64_t seed = 1;
	std::size_t n_angles = 11;
	std::string out;

	void add(CLI::App& app)
	{
		auto* c = app.add_subcommand("simulate", "synthesize a native dataset");
		c->add_option("--phantom", phantom, "preset: sr (points), sc (cysts), er (wires in speckle)")
				->required()->check(CLI::IsMember({"sr", "sc", "er"}));
		c->add_option("--seed", seed, "phantom seed")->capture_default_str();
		c->add_option("--n-angles", n_angles, "steering angles spread over [-16, 16] degrees")
				->capture_default_str();
		c->add_option("--out", out, "output directory")->required();
		c->callback([this] { run(); });
	}

	void run()
	{
		pwica_dataset* raw = nullptr;
		std::size_t dropped = 0;
		check(pwica_dataset_simulate(phantom.c_str(), seed, n_angles, &raw, &dropped), "simulate");
		DatasetPtr ds(raw);
		check(pwica_dataset_write_native(ds.get(), out.c_str()), "writing " + out);
		auto rec = base_record("simulate");
		rec["config"] = {{"phantom", phantom}, {"seed", seed}, {"n_angles", n_angles}};
		rec["dataset"] = dataset_json(ds.get());
		rec["dropped_scatterers"] = dropped;
		write_provenance(fs::path(out) / "provenance.json", rec);
		if (dropped > 0)
			std::fprintf(stderr, "warning: %zu scatterers outside the trace window were dropped\n", dropped);
	}
};

struct BeamformCmd {
	InputOptions input;
	BeamformOptions opts;
	std::string method;
	std::size_t n_angles = 1;
	std::string indices;
	std::string out;

	void add(CLI::App& app)
	{
		auto* c = app.add_subcommand("beamform", "beamform a dataset into a B-mode image");
		input.add(c);
		c->add_option("--method", method, "das, cf or ica")->required()
				->check(CLI::IsMember({"das", "cf", "ica"}));
		auto* count = c->add_option("--angles", n_angles,
				"number of compounded angles, symmetric about 0 (odd, or all)")->capture_default_str();
		c->add_option("--angle-indices", indices, "explicit comma-separated acquisition indices")
				->excludes(count);
		c->add_option("--out", out, "output image (.png, .pgm or .csv)")->required();
		opts.add(c);
		c->callback([this] { run(); });
	}

	void run()
	{
		auto ds = input.open();
		std::vector<std::size_t> angles;
		if (!indices.empty()) {
			for (const auto& s : split(indices, ','))
				angles.push_back(parse_size(s));
		} else {
			angles = angle_subset(ds.get(), n_angles);
		}
		auto r = run_method(ds.get(), method, angles, opts);
		check(pwica_image_write(r.image.get(), out.c_str()), "writing " + out);
		auto rec = base_record("beamform");
		rec["input"] = input.json();
		rec["dataset"] = dataset_json(ds.get());
		rec["method"] = method;
		rec["angle_indices"] = angles;
		rec["config"] = opts.json();
		rec["ica"] = ica_json(r);
		rec["output"] = out;
		write_provenance(sidecar(out), rec);
	}
};

struct MetricsCmd {
	std::string image;
	InputOptions dataset;
	std::string report;

	void add(CLI::App& app)
	{
		auto* c = app.add_subcommand("metrics", "FWHM / CNR of a beamformed image");
		c->add_option("--in", image, "image written by beamform (.csv)")->required()->check(CLI::ExistingFile);
		dataset.add(c, "--dataset");
		c->add_option("--report", report, "CSV report")->required();
		c->callback([this] { run(); });
	}

	void run()
	{
		auto ds = dataset.open();
		pwica_image* raw = nullptr;
		check(pwica_image_read_csv(image.c_str(), &raw), "reading " + image);
		ImagePtr img(raw);
		pwica_metrics m;
		check(pwica_image_metrics(img.get(), ds.get(), &m), "metrics");

		// method, angles and seeds come from the image's provenance record
		std::string method = "unknown", n_angles = "", ica_seed = "na", converged = "na";
		const fs::path prov = sidecar(image);
		if (fs::exists(prov)) {
			std::ifstream in(prov);
			const auto j = nlohmann::json::parse(in, nullptr, false);
			if (!j.is_discarded()) {
				method = j.value("method", method);
				if (j.contains("angle_indices"))
					n_angles = std::to_string(j["angle_indices"].size());
				if (j.contains("ica") && j["ica"].is_object()) {
					ica_seed = std::to_string(j["ica"].value("seed", std::uint64_t{0}));
					converged = j["ica"].value("converged", false) ? "1" : "0";
				}
			}
		}
		const auto info = info_of(ds.get());
		std::string csv = "dataset,method,n_angles,fwhm_axial_mm,fwhm_lateral_mm,cnr_db,dataset_seed,ica_seed,converged\n";
		csv += std::string(pwica_dataset_name(ds.get())) + "," + method + "," + n_angles + ","
				+ (m.has_fwhm ? num(m.fwhm_axial_mm) : "") + ","
				+ (m.has_fwhm ? num(m.fwhm_lateral_mm) : "") + ","
				+ (m.has_cnr ? num(m.cnr_db) : "") + "," + std::to_string(info.seed) + ","
				+ ica_seed + "," + converged + "\n";
		write_file(report, csv);
		auto rec = base_record("metrics");
		rec["image"] = image;
		rec["dataset"] = dataset.json();
		rec["report"] = report;
		write_provenance(sidecar(report), rec);
	}
};

struct WeightsCmd {
	InputOptions input;
	BeamformOptions opts;
	std::string out;
	std::size_t n_fft = 2048;

	void add(CLI::App& app)
	{
		auto* c = app.add_subcommand("weights", "estimated apodization vs the DAS window, space and frequency");
		input.add(c);
		c->add_option("--out", out, "CSV output")->required();
		c->add_option("--n-fft", n_fft, "spectrum length")->capture_default_str();
		opts.add(c);
		c->callback([this] { run(); });
	}

	void emit(std::string& csv, const std::string& name, const pwica_profile* p,
			const std::string& seed, const std::string& converged) const
	{
		std::size_t n = 0;
		check(pwica_profile_weights(p, nullptr, 0, &n), "weights");
		std::vector<double> w(n);
		check(pwica_profile_weights(p, w.data(), w.size(), &n), "weights");
		pwica_spectrum_info s;
		check(pwica_profile_spectrum(p, n_fft, &s, nullptr, nullptr, 0), "spectrum");
		std::vector<double> f(s.n_bins), mag(s.n_bins);
		check(pwica_profile_spectrum(p, n_fft, &s, f.data(), mag.data(), s.n_bins), "spectrum");
		const std::string tail = "," + seed + "," + converged + "\n";
		for (std::size_t i = 0; i < n; ++i)
			csv += name + ",weight," + std::to_string(i) + "," + num(w[i]) + tail;
		for (std::size_t i = 0; i < f.size(); ++i)
			csv += name + ",spectrum_db," + num(f[i]) + "," + num(mag[i]) + tail;
		csv += name + ",mainlobe_width,," + num(s.mainlobe_width) + tail;
		csv += name + ",sidelobe_db,," + num(s.sidelobe_db) + tail;
		csv += name + ",leakage,," + num(s.leakage) + tail;
	}

	void run()
	{
		auto ds = input.open();
		const auto o = opts.c_options();
		pwica_profile* raw = nullptr;
		check(pwica_profile_estimate(ds.get(), &o, &raw), "ICA estimation");
		ProfilePtr ica(raw);
		pwica_profile_info pi;
		check(pwica_profile_get_info(ica.get(), &pi), "profile info");
		if (!pi.converged && !opts.allow_nonconverged)
			throw CliError("FastICA did not converge (seed " + std::to_string(pi.seed)
					+ "); pass --allow-nonconverged to keep the estimate", PWICA_NOT_CONVERGED + 1);

		check(pwica_profile_window(opts.window.c_str(), pi.length, &raw), "window");
		ProfilePtr window(raw);

		std::string csv = "profile,series,x,value,ica_seed,converged\n";
		emit(csv, "ica", ica.get(), std::to_string(pi.seed), pi.converged ? "1" : "0");
		emit(csv, opts.window, window.get(), "na", "na");
		write_file(out, csv);

		auto rec = base_record("weights");
		rec["input"] = input.json();
		rec["dataset"] = dataset_json(ds.get());
		rec["config"] = opts.json();
		rec["n_fft"] = n_fft;
		rec["ica"] = {{"seed", pi.seed}, {"converged", static_cast<bool>(pi.converged)},
			{"iterations_used", pi.iterations_used}, {"estimation_angle_index", pi.estimation_angle}};
		rec["output"] = out;
		write_provenance(sidecar(out), rec);
	}
};

struct NoiseSweepCmd {
	InputOptions input;
	BeamformOptions opts;
	std::string channels;
	std::string channel_counts;
	std::string snrs = "-10,-20,-40";
	std::string methods = "das,cf,ica";
	std::size_t n_angles = 1;
	std::uint64_t noise_seed = 1;
	std::string report;

	void add(CLI::App& app)
	{
		auto* c = app.add_subcommand("noise-sweep", "image degradation when channels turn noisy");
		input.add(c);
		auto* ch = c->add_option("--channels", channels,
				"noisy channel sets, 0-based; ';' separates sets, ',' channels (e.g. \"63;62,63,64\")");
		c->add_option("--channel-counts", channel_counts,
				"set sizes centered on the middle element (e.g. 1,3,5)")->excludes(ch);
		c->add_option("--snr-db", snrs, "SNR levels in dB (inf = clean)")->capture_default_str();
		c->add_option("--methods", methods, "comma-separated methods")->capture_default_str();
		c->add_option("--angles", n_angles, "compounded angles")->capture_default_str();
		c->add_option("--noise-seed", noise_seed, "noise seed")->capture_default_str();
		c->add_option("--report", report, "CSV report")->required();
		opts.add(c);
		c->callback([this] { run(); });
	}

	void run()
	{
		auto ds = input.open();
		const auto info = info_of(ds.get());
		std::vector<std::vector<std::size_t>> sets;
		if (!channels.empty()) {
			for (const auto& set : split(channels, ';')) {
				std::vector<std::size_t> s;
				for (const auto& c : split(set, ','))
					s.push_back(parse_size(c));
				sets.push_back(std::move(s));
			}
		} else {
			const std::string counts = channel_counts.empty() ? "1,3,5" : channel_counts;
			const std::size_t mid = (info.n_elements - 1) / 2;
			for (const auto& c : split(counts, ',')) {
				const std::size_t k = parse_size(c);
				if (k == 0 || k > info.n_elements)
					throw CliError("--channel-counts: " + c + " is not in [1, n_elements]", 1);
				std::vector<std::size_t> s;
				const std::size_t first = mid >= (k - 1) / 2 ? mid - (k - 1) / 2 : 0;
				for (std::size_t i = 0; i < k && first + i < info.n_elements; ++i)
					s.push_back(first + i);
				sets.push_back(std::move(s));
			}
		}
		std::vector<double> levels;
		for (const auto& s : split(snrs, ','))
			levels.push_back(parse_double(s));
		const auto ms = parse_methods(methods);
		const auto angles = angle_subset(ds.get(), n_angles);

		std::string csv = "dataset,method,n_angles,channels,n_noisy,snr_db,rmse_db,dataset_seed,noise_seed,ica_seed,converged\n";
		ordered_json runs = ordered_json::array();
		for (const auto& m : ms) {
			auto clean = run_method(ds.get(), m, angles, opts);
			runs.push_back({{"method", m}, {"noise", nullptr}, {"ica", ica_json(clean)}});
			for (const auto& set : sets) {
				for (double snr : levels) {
					pwica_dataset* raw = nullptr;
					check(pwica_dataset_add_noise(ds.get(), set.data(), set.size(), snr, noise_seed, &raw),
							"noise injection");
					DatasetPtr noisy(raw);
					auto r = run_method(noisy.get(), m, angles, opts);
					double e = 0.0;
					check(pwica_image_rmse(r.image.get(), clean.image.get(), &e), "rmse");
					csv += std::string(pwica_dataset_name(ds.get())) + "," + m + ","
							+ std::to_string(angles.size()) + "," + joined(set, ' ') + ","
							+ std::to_string(set.size()) + "," + num(snr) + "," + num(e) + ","
							+ std::to_string(info.seed) + "," + std::to_string(noise_seed) + ","
							+ (r.has_profile ? std::to_string(r.profile_info.seed) : "na") + ","
							+ converged_field(r) + "\n";
					runs.push_back({{"method", m}, {"noise", {{"channels", set}, {"snr_db", num(snr)}}},
						{"ica", ica_json(r)}});
				}
			}
		}
		write_file(report, csv);
		auto rec = base_record("noise-sweep");
		rec["input"] = input.json();
		rec["dataset"] = dataset_json(ds.get());
		rec["config"] = opts.json();
		rec["angle_indices"] = angles;
		rec["noise_seed"] = noise_seed;
		rec["runs"] = runs;
		rec["report"] = report;
		write_provenance(sidecar(report), rec);
	}
};

struct CompareCmd {
	InputOptions input;
	BeamformOptions opts;
	std::string methods = "das,ica";
	std::string angle_counts = "1,11,75";
	std::string report;

	void add(CLI::App& app)
	{
		auto* c = app.add_subcommand("compare", "metrics table over methods and angle counts");
		input.add(c);
		c->add_option("--methods", methods, "comma-separated methods")->capture_default_str();
		c->add_option("--angles", angle_counts, "comma-separated compounded angle counts")
				->capture_default_str();
		c->add_option("--report", report, "CSV report")->required();
		opts.add(c);
		c->callback([this] { run(); });
	}

	void run()
	{
		auto ds = input.open();
		const auto info = info_of(ds.get());
		const auto ms = parse_methods(methods);
		std::vector<std::size_t> counts;
		for (const auto& s : split(angle_counts, ','))
			counts.push_back(parse_size(s));
		if (counts.empty())
			throw CliError("--angles: empty list", 1);

		std::string csv = "dataset,method,n_angles,fwhm_axial_mm,fwhm_lateral_mm,cnr_db,dataset_seed,ica_seed,converged\n";
		ordered_json runs = ordered_json::array();
		for (std::size_t count : counts) {
			if (count > info.n_angles)
				throw CliError("--angles: " + std::to_string(count) + " angles requested, dataset has "
						+ std::to_string(info.n_angles), 1);
			const auto angles = angle_subset(ds.get(), count);
			for (const auto& m : ms) {
				auto r = run_method(ds.get(), m, angles, opts);
				pwica_metrics mt;
				check(pwica_image_metrics(r.image.get(), ds.get(), &mt), "metrics");
				csv += std::string(pwica_dataset_name(ds.get())) + "," + m + "," + std::to_string(count) + ","
						+ (mt.has_fwhm ? num(mt.fwhm_axial_mm) : "") + ","
						+ (mt.has_fwhm ? num(mt.fwhm_lateral_mm) : "") + ","
						+ (mt.has_cnr ? num(mt.cnr_db) : "") + "," + std::to_string(info.seed) + ","
						+ (r.has_profile ? std::to_string(r.profile_info.seed) : "na") + ","
						+ converged_field(r) + "\n";
				runs.push_back({{"method", m}, {"angle_indices", angles}, {"ica", ica_json(r)}});
			}
		}
		write_file(report, csv);
		auto rec = base_record("compare");
		rec["input"] = input.json();
		rec["dataset"] = dataset_json(ds.get());
		rec["config"] = opts.json();
		rec["runs"] = runs;
		rec["report"] = report;
		write_provenance(sidecar(report), rec);
	}
};

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Plane-wave ultrasound beamforming with ICA-estimated apodization"};
	app.require_subcommand(1);
	app.set_version_flag("--version", std::string(pwica_version()));

	SimulateCmd simulate;
	BeamformCmd beamform;
	MetricsCmd metrics;
	WeightsCmd weights;
	NoiseSweepCmd sweep;
	CompareCmd compare;
	simulate.add(app);
	beamform.add(app);
	metrics.add(app);
	weights.add(app);
	sweep.add(app);
	compare.add(app);

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		return app.exit(e);
	} catch (const CliError& e) {
		std::fprintf(stderr, "pwica: %s\n", e.what());
		return e.code;
	} catch (const std::exception& e) {
		std::fprintf(stderr, "pwica: %s\n", e.what());
		return 1;
	}
	return 0;
}
