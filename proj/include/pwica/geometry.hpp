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
 * @file geometry.hpp Closed-form per-pixel geometry: plane-wave delay law,
 * F-number aperture and the equal-delay locus.
 *
 *****************************************************************************/
#pragma once

#include <cmath>

#include "pwica/model.hpp"

namespace pwica {

/// Distance travelled by a plane wave steered at `angle` from the array
/// origin (t = 0) to (x, z).
inline double transmit_distance(double x, double z, double angle) noexcept
{
	return z * std::cos(angle) + x * std::sin(angle);
}

inline double receive_distance(double x, double z, double element_x) noexcept
{
	const double dx = x - element_x;
	return std::sqrt(dx * dx + z * z);
}

/// Two-way time of flight [s] from the plane-wave origin to (x, z) and back
/// to the element at element_x.
inline double propagation_delay(double x, double z, double angle, double element_x,
		double sound_speed) noexcept
{
	return (transmit_distance(x, z, angle) + receive_distance(x, z, element_x)) / sound_speed;
}

/// Number of elements spanned by an aperture of length z / f_number: rounded
/// up, then forced odd so the aperture is symmetric about its center element.
/// Never less than one.
std::size_t aperture_element_count(double z, double f_number, double pitch);

/// Active receive aperture for a pixel at (pixel_x, z), centered on the
/// nearest element and clamped to the physical array.
ApertureSpan active_aperture(double z, double f_number, const ProbeGeometry& probe,
		double pixel_x);

struct AmbiguityPoint {
	double x = 0.0;
	double z = 0.0;
	bool physical = false;   // false when z <= 0
};

/// Second scatterer position that shares the 0-degree arrival time at the
/// element at element_x with a scatterer at (element_x, z1).
///
/// Implements z2 = z1 - (x2 - xi)^2 / (4 z1). The relation is a parabola in
/// x2 even though it is often described as an ellipse; the printed relation
/// is what is implemented and what the delay check verifies.
AmbiguityPoint ambiguity_locus(double z1, double element_x, double x2);

} // namespace pwica
