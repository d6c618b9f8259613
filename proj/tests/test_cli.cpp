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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& work()
{
	static const fs::path dir = [] {
		auto d = fs::temp_directory_path() / ("pwica_test_cli_" + std::to_string(::getpid()));
		fs::remove_all(d);
		fs::create_directories(d);
		return d;
	}();
	return dir;
}

struct Cleanup {
	~Cleanup() { fs::remove_all(work()); }
} cleanup;

int run(const std::string& args)
{
	const std::string cmd = std::string(PWICA_CLI) + " " + args + " > " + (work() / "out.txt").string()
			+ " 2>&1";
	const int status = std::system(cmd.c_str());
	return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
	std::ifstream in(p, std::ios::binary);
	return {std::istreambuf_iterator<char>(in), {}};
}

std::string path(const std::string& name)
{
	return (work() / name).string();
}

void ensure_sr()
{
	if (!fs::exists(work() / "sr" / "metadata.json"))
		REQUIRE(run("simulate --phantom sr --seed 1 --n-angles 3 --out " + path("sr")) == 0);
}

} // namespace

TEST_CASE("usage errors")
{
	CHECK(run("") != 0);
	CHECK(run("--help") == 0);
	CHECK(run("--version") == 0);
	CHECK(slurp(work() / "out.txt").find("0.1.0") != std::string::npos);
	CHECK(run("simulate --phantom sr --bogus 1 --out " + path("x")) != 0);
	CHECK(run("simulate --phantom qq --out " + path("x")) != 0);
	CHECK(run("beamform --in " + path("missing") + " --method das --out " + path("x.png")) != 0);
}

TEST_CASE("simulate writes a dataset with provenance")
{
	ensure_sr();
	CHECK(fs::exists(work() / "sr" / "channels.f32"));
	const auto prov = nlohmann::json::parse(slurp(work() / "sr" / "provenance.json"));
	CHECK(prov["command"] == "simulate");
	CHECK(prov["config"]["seed"] == 1);
	CHECK(prov["dataset"]["n_angles"] == 3);
}

TEST_CASE("beamform and metrics")
{
	ensure_sr();
	REQUIRE(run("beamform --in " + path("sr") + " --method das --angles 1 --out " + path("das.png")) == 0);
	CHECK(fs::exists(work() / "das.png"));
	CHECK(fs::exists(work() / "das.png.provenance.json"));

	REQUIRE(run("beamform --in " + path("sr") + " --method ica --angles 1 --allow-nonconverged --out "
			+ path("ica.csv")) == 0);
	const auto prov = nlohmann::json::parse(slurp(work() / "ica.csv.provenance.json"));
	CHECK(prov["ica"]["seed"] == 0);
	CHECK(prov["ica"].contains("converged"));
	CHECK(prov["config"]["profile_mapping"] == "element");

	REQUIRE(run("metrics --in " + path("ica.csv") + " --dataset " + path("sr") + " --report "
			+ path("m.csv")) == 0);
	const std::string report = slurp(work() / "m.csv");
	CHECK(report.rfind("dataset,method,n_angles,fwhm_axial_mm,fwhm_lateral_mm,cnr_db,dataset_seed,ica_seed,converged\n", 0) == 0);
	CHECK(report.find("synthetic_sr,ica,1,") != std::string::npos);
}

TEST_CASE("non-convergence fails the run unless overridden")
{
	ensure_sr();
	CHECK(run("beamform --in " + path("sr") + " --method ica --max-iterations 1 --out " + path("nc.png")) != 0);
	CHECK_FALSE(fs::exists(work() / "nc.png"));
	CHECK(slurp(work() / "out.txt").find("converge") != std::string::npos);
	CHECK(run("beamform --in " + path("sr") + " --method ica --max-iterations 1 --allow-nonconverged --out "
			+ path("nc.png")) == 0);
}

TEST_CASE("angle selection")
{
	ensure_sr();
	CHECK(run("beamform --in " + path("sr") + " --method das --angle-indices 0,2 --out " + path("two.pgm")) == 0);
	CHECK(run("beamform --in " + path("sr") + " --method das --angles 3 --angle-indices 0 --out "
			+ path("x.pgm")) != 0);
	CHECK(run("compare --in " + path("sr") + " --methods das --angles 1,75 --report " + path("c.csv")) != 0);
}

TEST_CASE("compare is deterministic")
{
	ensure_sr();
	REQUIRE(run("compare --in " + path("sr") + " --methods das,cf --angles 1,3 --report " + path("c1.csv")) == 0);
	REQUIRE(run("compare --in " + path("sr") + " --methods das,cf --angles 1,3 --report " + path("c2.csv")) == 0);
	const std::string a = slurp(work() / "c1.csv");
	CHECK(a == slurp(work() / "c2.csv"));
	auto p1 = nlohmann::json::parse(slurp(work() / "c1.csv.provenance.json"));
	auto p2 = nlohmann::json::parse(slurp(work() / "c2.csv.provenance.json"));
	p1.erase("report");
	p2.erase("report");
	CHECK(p1 == p2);
	CHECK(std::count(a.begin(), a.end(), '\n') == 5);
	CHECK(a.find("synthetic_sr,cf,3,") != std::string::npos);
}

TEST_CASE("weights and noise sweep")
{
	ensure_sr();
	REQUIRE(run("weights --in " + path("sr") + " --allow-nonconverged --out " + path("w.csv")) == 0);
	const std::string w = slurp(work() / "w.csv");
	CHECK(w.find("ica,weight,0,") != std::string::npos);
	CHECK(w.find("tukey:0.25,sidelobe_db,,") != std::string::npos);
	CHECK(w.find("ica,leakage,,") != std::string::npos);

	REQUIRE(run("noise-sweep --in " + path("sr") + " --methods das --channels \"63;62,63,64\" --snr-db -20,inf"
			" --report " + path("n.csv")) == 0);
	const std::string n = slurp(work() / "n.csv");
	CHECK(std::count(n.begin(), n.end(), '\n') == 5);
	CHECK(n.find("synthetic_sr,das,1,62 63 64,3,-20,") != std::string::npos);
	// the clean level reproduces the reference exactly
	CHECK(n.find("synthetic_sr,das,1,63,1,inf,0,") != std::string::npos);
	CHECK(run("noise-sweep --in " + path("sr") + " --channels 63 --channel-counts 1 --report "
			+ path("n2.csv")) != 0);
}
