/*
 Copyright 2026 The hystab Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>

namespace hystab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HYSTAB_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& what) : Error(what) {}    \
    }

HYSTAB_DEFINE_ERROR(InvalidModel);
HYSTAB_DEFINE_ERROR(SingularAtS);
HYSTAB_DEFINE_ERROR(EigFailure);
HYSTAB_DEFINE_ERROR(NonFiniteInput);
HYSTAB_DEFINE_ERROR(InconsistentInitialState);
HYSTAB_DEFINE_ERROR(NoOverlap);
HYSTAB_DEFINE_ERROR(OpenPath);
HYSTAB_DEFINE_ERROR(InvalidSector);
HYSTAB_DEFINE_ERROR(InvalidArgument);
HYSTAB_DEFINE_ERROR(ConfigError);

#undef HYSTAB_DEFINE_ERROR

}  // namespace hystab
