//
// Copyright 2026 The FedQ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef FEDQ_COMMON_ERROR_H_
#define FEDQ_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace fedq {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor or network shapes do not compose.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A NaN or Inf appeared where only finite values are allowed.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Malformed, truncated, or mismatched serialized data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A peer violated the federated protocol (unknown index, unexpected message).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// The channel between agents failed.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Invalid arguments or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedq

#endif  // FEDQ_COMMON_ERROR_H_
