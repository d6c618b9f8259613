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

#include <stdexcept>
#include <string>

namespace pwica {

/// Error categories. Values match the status codes of the C API.
enum class ErrorCode {
	invalid_argument = 1,
	io = 2,
	format = 3,
	rank_deficient = 4,
	not_converged = 5,
	internal = 6,
};

class Error : public std::runtime_error {
public:
	Error(ErrorCode code, const std::string& what)
		: std::runtime_error(what), code_(code) {}

	ErrorCode code() const noexcept { return code_; }

private:
	ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what)
{
	throw Error(code, what);
}

inline void require(bool cond, const std::string& what)
{
	if (!cond)
		throw Error(ErrorCode::invalid_argument, what);
}

} // namespace pwica
