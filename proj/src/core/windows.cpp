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
#include "pwica/windows.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "fftw3.h"

#include "pwica/error.hpp"

namespace pwica {

WindowSpec WindowSpec::parse(const std::string& text)
{
	WindowSpec spec;
	if (text == "boxcar" || text == "rect") {
		spec.kind = WindowKind::boxcar;
		spec.taper = 0.0;
	} else if (text == "hann") {
		spec.kind = WindowKind::hann;
		spec.taper = 1.0;
	} else if (text.rfind("tukey", 0) == 0) {
		spec.kind = WindowKind::tukey;
		if (text.size() > 5) {
			require(text[5] == ':', "window: expected tukey:<taper>, got '" + text + "'");
			std::size_t used = 0;
			const std::string num = text.substr(6);
			try {
				spec.taper = std::stod(num, &used);
			} catch (const std::exception&) {
				used = 0;
			}
			require(used == num.size() && !num.empty(), "window: bad tukey taper '" + num + "'");
		}
		require(spec.taper >= 0.0 && spec.taper <= 1.0, "window: tukey taper must lie in [0, 1]");
	} else {
		fail(ErrorCode::invalid_argument, "window: unknown window '" + text + "'");
	}
	return spec;
}

std::string WindowSpec::to_string() const
{
	switch (kind) {
	case WindowKind::boxcar: return "boxcar";
	case WindowKind::hann: return "hann";
	case WindowKind::tukey: {
		std::ostringstream os;
		os << "tukey:" << taper;
		return os.str();
	}
	}
	return "unknown";
}

ApodizationProfile tukey(std::size_t length, double taper)
{
	require(length >= 1, "tukey: length must be at least 1");
	require(taper >= 0.0 && taper <= 1.0, "tukey: taper must lie in [0, 1]");
	ApodizationProfile p;
	p.normalization = Normalization::peak;
	p.weights.assign(length, 1.0);
	if (length == 1 || taper == 0.0)
		return p;

	const double span = static_cast<double>(length - 1);
	// taper/2 of the window on each side follows a raised cosine
	for (std::size_t k = 0; k <= (length - 1) / 2; ++k) {
		const double u = static_cast<double>(k) / span;   // in [0, 0.5]
		double w = 1.0;
		if (u < taper / 2.0)
			w = 0.5 * (1.0 + std::cos(M_PI * (2.0 * u / taper - 1.0)));
		p.weights[k] = w;
		p.weights[length - 1 - k] = w;
	}
	if (length % 2 == 1)
		p.weights[length / 2] = 1.0;
	return p;
}

ApodizationProfile boxcar(std::size_t length)
{
	return tukey(length, 0.0);
}

ApodizationProfile hann(std::size_t length)
{
	return tukey(length, 1.0);
}

ApodizationProfile make_window(const WindowSpec& spec, std::size_t length)
{
	switch (spec.kind) {
	case WindowKind::boxcar: return boxcar(length);
	case WindowKind::hann: return hann(length);
	case WindowKind::tukey: return tukey(length, spec.taper);
	}
	fail(ErrorCode::internal, "unknown window kind");
}

WindowSpectrum window_spectrum(const ApodizationProfile& profile, std::size_t n_fft)
{
	const std::size_t len = profile.size();
	require(len >= 1, "window spectrum: empty profile");
	require(n_fft >= 4 * len, "window spectrum: n_fft must be at least 4x the window length");

	std::vector<double> in(n_fft, 0.0);
	std::copy(profile.weights.begin(), profile.weights.end(), in.begin());
	const std::size_t n_half = n_fft / 2 + 1;
	std::vector<std::complex<double>> out(n_half);
	fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_fft), in.data(),
			reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
	fftw_execute(plan);
	fftw_destroy_plan(plan);

	std::vector<double> mag(n_half);
	for (std::size_t k = 0; k < n_half; ++k)
		mag[k] = std::abs(out[k]);
	const auto peak_it = std::max_element(mag.begin(), mag.end());
	const double peak = *peak_it;
	require(peak > 0.0, "window spectrum: zero window");
	const std::size_t k_peak = static_cast<std::size_t>(peak_it - mag.begin());

	WindowSpectrum s;
	s.frequency.resize(n_half);
	s.magnitude_db.resize(n_half);
	for (std::size_t k = 0; k < n_half; ++k) {
		s.frequency[k] = static_cast<double>(k) / static_cast<double>(n_fft);
		s.magnitude_db[k] = 20.0 * std::log10(std::max(mag[k] / peak, 1e-300));
	}

	// main lobe: from the peak out to the first local minimum on each side
	std::size_t hi = k_peak;
	while (hi + 1 < n_half && mag[hi + 1] <= mag[hi])
		++hi;
	std::size_t lo = k_peak;
	while (lo > 0 && mag[lo - 1] <= mag[lo])
		--lo;

	// -3 dB crossings, linearly interpolated in dB
	const double target = -3.0;
	auto crossing = [&](std::size_t from, int dir, std::size_t stop) {
		std::size_t k = from;
		while (k != stop) {
			const std::size_t next = static_cast<std::size_t>(static_cast<long>(k) + dir);
			if (s.magnitude_db[next] < target) {
				const double a = s.magnitude_db[k];
				const double b = s.magnitude_db[next];
				const double t = (a - target) / (a - b);
				return static_cast<double>(k) + dir * t;
			}
			k = next;
		}
		return static_cast<double>(stop);
	};
	const double right = crossing(k_peak, +1, n_half - 1);
	// a DC-centered lobe is mirrored into negative frequencies
	const double left = (k_peak == 0) ? -right : crossing(k_peak, -1, 0);
	s.mainlobe_width = (right - left) / static_cast<double>(n_fft);

	double side = 0.0;
	for (std::size_t k = 0; k < n_half; ++k)
		if (k < lo || k > hi)
			side = std::max(side, mag[k]);
	s.sidelobe_db = side > 0.0 ? 20.0 * std::log10(side / peak) : -std::numeric_limits<double>::infinity();

	// two-sided energy: bins 1..n/2-1 appear twice in the full spectrum
	auto weight = [&](std::size_t k) {
		return (k == 0 || (n_fft % 2 == 0 && k == n_half - 1)) ? 1.0 : 2.0;
	};
	double total = 0.0;
	double main = 0.0;
	for (std::size_t k = 0; k < n_half; ++k) {
		const double e = weight(k) * mag[k] * mag[k];
		total += e;
		if (k >= lo && k <= hi)
			main += e;
	}
	s.leakage = 1.0 - main / total;
	return s;
}

} // namespace pwica
