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

// JSON mappings for the domain types (nlohmann ADL hooks). Doubles are
// written in shortest round-trip form, so a dump/parse cycle is exact.

#include "json.hpp"

#include "pwica/model.hpp"

namespace pwica {

inline void to_json(nlohmann::json& j, const ProbeGeometry& p)
{
	j = {{"element_x", p.element_x}, {"pitch", p.pitch}};
}
inline void from_json(const nlohmann::json& j, ProbeGeometry& p)
{
	j.at("element_x").get_to(p.element_x);
	j.at("pitch").get_to(p.pitch);
}

inline void to_json(nlohmann::json& j, const ImageGrid& g)
{
	j = {{"x", g.x}, {"z", g.z}};
}
inline void from_json(const nlohmann::json& j, ImageGrid& g)
{
	j.at("x").get_to(g.x);
	j.at("z").get_to(g.z);
}

inline void to_json(nlohmann::json& j, const Point2& p)
{
	j = nlohmann::json::array({p.x, p.z});
}
inline void from_json(const nlohmann::json& j, Point2& p)
{
	p.x = j.at(0).get<double>();
	p.z = j.at(1).get<double>();
}

inline void to_json(nlohmann::json& j, const CystRegion& c)
{
	j = {{"center", c.center}, {"radius", c.radius}, {"inner_radius", c.inner_radius},
		{"outer_min", c.outer_min}, {"outer_max", c.outer_max}};
}
inline void from_json(const nlohmann::json& j, CystRegion& c)
{
	j.at("center").get_to(c.center);
	j.at("radius").get_to(c.radius);
	j.at("inner_radius").get_to(c.inner_radius);
	j.at("outer_min").get_to(c.outer_min);
	j.at("outer_max").get_to(c.outer_max);
}

NLOHMANN_JSON_SERIALIZE_ENUM(Normalization, {
	{Normalization::raw, "raw"},
	{Normalization::peak, "peak"},
	{Normalization::l1, "l1"},
})

inline void to_json(nlohmann::json& j, const ApodizationProfile& p)
{
	j = {{"weights", p.weights}, {"normalization", p.normalization}};
}
inline void from_json(const nlohmann::json& j, ApodizationProfile& p)
{
	j.at("weights").get_to(p.weights);
	j.at("normalization").get_to(p.normalization);
}

inline void to_json(nlohmann::json& j, const ApertureSpan& s)
{
	j = {{"first", s.first}, {"last", s.last}, {"nominal_first", s.nominal_first},
		{"nominal_last", s.nominal_last}};
}
inline void from_json(const nlohmann::json& j, ApertureSpan& s)
{
	j.at("first").get_to(s.first);
	j.at("last").get_to(s.last);
	j.at("nominal_first").get_to(s.nominal_first);
	j.at("nominal_last").get_to(s.nominal_last);
}

/// Inline form including the traces; the native format keeps them in a blob.
inline void to_json(nlohmann::json& j, const PlaneWaveAcquisition& a)
{
	j = {{"angles", a.angles}, {"n_elements", a.n_elements}, {"n_samples", a.n_samples},
		{"samples", a.samples}, {"sampling_rate", a.sampling_rate},
		{"sound_speed", a.sound_speed}, {"start_time", a.start_time}};
}
inline void from_json(const nlohmann::json& j, PlaneWaveAcquisition& a)
{
	j.at("angles").get_to(a.angles);
	j.at("n_elements").get_to(a.n_elements);
	j.at("n_samples").get_to(a.n_samples);
	j.at("samples").get_to(a.samples);
	j.at("sampling_rate").get_to(a.sampling_rate);
	j.at("sound_speed").get_to(a.sound_speed);
	j.at("start_time").get_to(a.start_time);
}

inline void to_json(nlohmann::json& j, const RFImage& img)
{
	j = {{"grid", img.grid}, {"values", img.values}};
}
inline void from_json(const nlohmann::json& j, RFImage& img)
{
	j.at("grid").get_to(img.grid);
	j.at("values").get_to(img.values);
}

inline void to_json(nlohmann::json& j, const BModeImage& img)
{
	j = {{"grid", img.grid}, {"values", img.values}, {"dynamic_range", img.dynamic_range}};
}
inline void from_json(const nlohmann::json& j, BModeImage& img)
{
	j.at("grid").get_to(img.grid);
	j.at("values").get_to(img.values);
	j.at("dynamic_range").get_to(img.dynamic_range);
}

inline void to_json(nlohmann::json& j, const DelayedCube& c)
{
	j = {{"grid", c.grid}, {"n_elements", c.n_elements}, {"values", c.values}, {"spans", c.spans}};
}
inline void from_json(const nlohmann::json& j, DelayedCube& c)
{
	j.at("grid").get_to(c.grid);
	j.at("n_elements").get_to(c.n_elements);
	j.at("values").get_to(c.values);
	j.at("spans").get_to(c.spans);
}

} // namespace pwica
