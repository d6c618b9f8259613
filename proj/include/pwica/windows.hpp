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
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pwica/model.hpp"

namespace pwica {

enum class WindowKind { boxcar, tukey, hann };

struct WindowSpec {
	WindowKind kind = WindowKind::tukey;
	double taper = 0.25;   // tukey only

	/// Parses "boxcar", "hann", "tukey" or "tukey:<taper>".
	static WindowSpec parse(const std::string& text);
	std::string to_string() const;
};

/// Symmetric tapered-cosine window, peak 1. taper = 0 is a boxcar and
/// taper = 1 a Hann window.
ApodizationProfile tukey(std::size_t length, double taper);
ApodizationProfile boxcar(std::size_t length);
ApodizationProfile hann(std::size_t length);
ApodizationProfile make_window(const WindowSpec& spec, std::size_t length);

struct WindowSpectrum {
	std::vector<double> frequency;   // cycles per element, 0 .. 0.5
	std::vector<double> magnitude_db;
	double mainlobe_width = 0.0;     // full -3 dB width, cycles per element
	double sidelobe_db = 0.0;        // highest side lobe relative to the main lobe peak
	double leakage = 0.0;            // fraction of spectral energy outside the main lobe
};

/// Zero-padded magnitude spectrum of a window, normalized to a 0 dB peak,
/// with its main lobe, side lobe and leakage descriptors. The main lobe
/// extends from DC to the first spectral null (local minimum).
WindowSpectrum window_spectrum(const ApodizationProfile& profile, std::size_t n_fft);

} // namespace pwica
