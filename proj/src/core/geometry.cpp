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
#include "pwica/geometry.hpp"

#include <algorithm>
#include <limits>

#include "pwica/error.hpp"

namespace pwica {

std::size_t aperture_element_count(double z, double f_number, double pitch)
{
	require(z > 0.0, "aperture: depth must be positive");
	require(f_number > 0.0, "aperture: f-number must be positive");
	const double length = z / f_number;
	const double ratio = length / pitch;
	// relative slack keeps exact multiples of the pitch from rounding up
	if (!std::isfinite(ratio) || ratio > 1e9)
		return std::numeric_limits<std::size_t>::max() / 4;
	auto count = static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12)));
	if (count < 1)
		count = 1;
	if (count % 2 == 0)
		++count;
	return count;
}

ApertureSpan active_aperture(double z, double f_number, const ProbeGeometry& probe,
		double pixel_x)
{
	const std::size_t n = probe.size();
	const std::size_t count = std::min(aperture_element_count(z, f_number, probe.pitch),
			2 * n + 1);
	const long half = static_cast<long>(count / 2);
	const long center = static_cast<long>(probe.nearest_element(pixel_x));

	ApertureSpan span;
	span.nominal_first = center - half;
	span.nominal_last = center + half;
	span.first = static_cast<std::size_t>(std::max(0L, span.nominal_first));
	span.last = static_cast<std::size_t>(std::min(static_cast<long>(n) - 1, span.nominal_last));
	return span;
}

AmbiguityPoint ambiguity_locus(double z1, double element_x, double x2)
{
	require(z1 > 0.0, "ambiguity locus: z1 must be positive");
	const double d = x2 - element_x;
	AmbiguityPoint p;
	p.x = x2;
	p.z = z1 - d * d / (4.0 * z1);
	p.physical = p.z > 0.0;
	return p;
}

} // namespace pwica
