// Copyright 2026 The relsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RELSUM_ERROR_H_
#define RELSUM_ERROR_H_

#include <stdexcept>
#include <string>

namespace relsum {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data, files, flags or violated preconditions. The CLI exits
// with status 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A scorer backend failed or spoke the wire protocol incorrectly. The CLI
// exits with status 2.
class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace relsum

#endif  // RELSUM_ERROR_H_
