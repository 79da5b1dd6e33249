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

#include "fedq/nn/serialize.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string_view>

#include "fedq/common/error.h"

namespace fedq::nn {

Bytes SerializeParams(const NetworkSpec& spec, const ParamSet& params) {
  const auto shapes = spec.ParamShapes();
  if (shapes.size() != params.buffers.size()) {
    throw ShapeError("serialize: param set does not match spec");
  }
  Bytes out;
  out.reserve(kParamMagicSize + 12 + params.NumParams() * 4 + shapes.size() * 4);
  ByteWriter w(out);
  w.Raw(std::string_view(kParamMagic, kParamMagicSize));
  w.U64(spec.Fingerprint());
  w.U32(static_cast<std::uint32_t>(params.buffers.size()));
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (params.buffers[i].shape != shapes[i]) {
      throw ShapeError("serialize: buffer " + std::to_string(i) + " shape mismatch");
    }
    w.F32Vector(params.buffers[i].data);
  }
  return out;
}

ParamSet DeserializeParams(std::span<const std::uint8_t> bytes,
                           const NetworkSpec& spec) {
  ByteReader r(bytes);
  auto magic = r.Raw(kParamMagicSize);
  if (!std::equal(magic.begin(), magic.end(), kParamMagic)) {
    throw FormatError("bad parameter magic");
  }
  if (r.U64() != spec.Fingerprint()) {
    throw FormatError("parameter fingerprint does not match network spec " +
                      spec.ToString());
  }
  const auto shapes = spec.ParamShapes();
  if (r.U32() != shapes.size()) throw FormatError("parameter buffer count mismatch");
  ParamSet p;
  p.buffers.reserve(shapes.size());
  for (const auto& shape : shapes) {
    auto data = r.F32Vector();
    if (data.size() != NumElements(shape)) {
      throw FormatError("parameter buffer length mismatch");
    }
    p.buffers.emplace_back(shape, std::move(data));
  }
  if (!r.done()) throw FormatError("trailing bytes after parameters");
  return p;
}

void SaveParams(const std::filesystem::path& path, const NetworkSpec& spec,
                const ParamSet& params) {
  const Bytes blob = SerializeParams(spec, params);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size()));
  if (!out) throw Error("failed writing " + path.string());
}

ParamSet LoadParams(const std::filesystem::path& path, const NetworkSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Bytes blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return DeserializeParams(blob, spec);
}

}  // namespace fedq::nn
