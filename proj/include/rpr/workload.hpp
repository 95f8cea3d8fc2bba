#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rpr/call.hpp"
#include "rpr/checkpoint.hpp"

namespace rpr {

// splitmix64: tiny, seedable, identical on every platform. The generator's
// determinism guarantee rests on never touching <random> distributions.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  std::vector<std::uint8_t> bytes(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(next());
    return out;
  }
};

struct WorkloadProfile {
  std::uint64_t seed = 1;
  std::uint32_t frames = 120;
  std::uint32_t textures_total = 64;
  std::uint32_t textures_touched_per_frame = 4;
  std::uint32_t state_writes_per_frame = 24;
  std::uint32_t upload_bytes = 4096;
  std::uint32_t shader_programs = 4;
  double churn = 0.01;

  void validate() const {
    if (churn < 0.0 || churn > 1.0) throw Error(Errc::InvalidCall, "churn must be in [0,1]");
  }

  // flat key=value file; '#' starts a comment
  static WorkloadProfile from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::Io, "cannot open profile " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_string(ss.str());
  }

  static WorkloadProfile from_string(const std::string& text) {
    WorkloadProfile p;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw Error(Errc::Syntax, "expected key=value in profile", line_no);
      std::string key = line.substr(0, eq);
      std::string value = line.substr(eq + 1);
      try {
        if (key == "seed") p.seed = std::stoull(value);
        else if (key == "frames") p.frames = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "texturesTotal") p.textures_total = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "texturesTouchedPerFrame") p.textures_touched_per_frame = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "stateWritesPerFrame") p.state_writes_per_frame = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "uploadBytes") p.upload_bytes = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "shaderPrograms") p.shader_programs = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "churn") p.churn = std::stod(value);
        else throw Error(Errc::Syntax, "unknown profile key '" + key + "'", line_no);
      } catch (const std::exception& e) {
        if (dynamic_cast<const Error*>(&e)) throw;
        throw Error(Errc::Syntax, "bad value for '" + key + "'", line_no);
      }
    }
    p.validate();
    return p;
  }
};

struct GeneratedCall {
  FunctionId fn;
  std::vector<CallArg> args;

  friend bool operator==(const GeneratedCall&, const GeneratedCall&) = default;
};

// Synthetic game-like call stream: asset setup up front, then per frame a
// mix of state churn, texture touches with re-uploads, streamed vertex data
// and a draw+swap. Deterministic per profile. Virtual ids are predicted,
// which holds whenever the stream is fed to a fresh session from the start.
class Workload {
 public:
  explicit Workload(WorkloadProfile profile) : profile_(profile), rng_(profile.seed) {
    profile_.validate();
  }

  const WorkloadProfile& profile() const { return profile_; }

  template <typename Sink>
  void emit_context(Sink&& sink) {
    sink(GeneratedCall{FunctionId::CreateContext, {}});
  }

  template <typename Sink>
  void emit_frame(Sink&& sink) {
    if (!assets_done_) emit_assets(sink);

    sink(GeneratedCall{FunctionId::ClearColor,
                       {ArgValue::real(rng_.unit()), ArgValue::real(rng_.unit()),
                        ArgValue::real(rng_.unit()), ArgValue::real(1.0)}});
    sink(GeneratedCall{FunctionId::Clear, {ArgValue::integer(0x4100)}});
    if (rng_.chance(0.125))
      sink(GeneratedCall{FunctionId::Viewport,
                         {ArgValue::integer(0), ArgValue::integer(0),
                          ArgValue::integer(640 + static_cast<std::int64_t>(rng_.below(4)) * 160),
                          ArgValue::integer(480 + static_cast<std::int64_t>(rng_.below(4)) * 120)}});

    for (std::uint32_t i = 0; i < profile_.state_writes_per_frame; ++i) emit_state_write(sink);

    for (std::uint32_t i = 0; i < profile_.textures_touched_per_frame && !textures_.empty(); ++i) {
      const Texture& t = textures_[rng_.below(textures_.size())];
      sink(GeneratedCall{FunctionId::BindTexture,
                         {ArgValue::token(t.target), ArgValue::id_ref(ResourceKind::Texture, t.vid)}});
      sink(GeneratedCall{FunctionId::TexParameter, random_tex_param(t.target)});
      if (rng_.chance(0.875))
        sink(GeneratedCall{FunctionId::TexImage,
                           {ArgValue::token(t.target), ArgValue::integer(0),
                            rng_.bytes(profile_.upload_bytes)}});
    }

    sink(GeneratedCall{FunctionId::VertexPointer, {rng_.bytes(profile_.upload_bytes)}});
    sink(GeneratedCall{FunctionId::ColorPointer, {rng_.bytes(profile_.upload_bytes)}});
    sink(GeneratedCall{FunctionId::TexCoordPointer, {rng_.bytes(profile_.upload_bytes)}});

    for (std::uint64_t vid : stream_buffers_) {
      sink(GeneratedCall{FunctionId::BindBuffer,
                         {ArgValue::token(gl::ARRAY_BUFFER), ArgValue::id_ref(ResourceKind::Buffer, vid)}});
      sink(GeneratedCall{FunctionId::BufferData,
                         {ArgValue::token(gl::ARRAY_BUFFER), rng_.bytes(profile_.upload_bytes),
                          ArgValue::token(gl::STREAM_DRAW)}});
    }

    if (!programs_.empty() && rng_.chance(0.5))
      sink(GeneratedCall{FunctionId::UseProgram,
                         {ArgValue::id_ref(ResourceKind::Program,
                                           programs_[rng_.below(programs_.size())])}});

    if (!textures_.empty() && rng_.chance(profile_.churn)) emit_churn(sink);

    sink(GeneratedCall{FunctionId::Draw,
                       {ArgValue::token(gl::TRIANGLES), ArgValue::integer(0),
                        ArgValue::integer(static_cast<std::int64_t>(3 * (1 + rng_.below(512))))}});
    sink(GeneratedCall{FunctionId::SwapBuffers, {}});
  }

  // Convenience: full stream for `frames` frames, context included.
  std::vector<GeneratedCall> all_calls() {
    std::vector<GeneratedCall> out;
    auto sink = [&](GeneratedCall c) { out.push_back(std::move(c)); };
    emit_context(sink);
    for (std::uint32_t f = 0; f < profile_.frames; ++f) emit_frame(sink);
    return out;
  }

 private:
  struct Texture {
    std::uint64_t vid;
    std::uint32_t target;
  };

  std::uint32_t random_tex_target() {
    std::uint64_t roll = rng_.below(8);
    if (roll == 0) return gl::TEXTURE_1D;
    if (roll == 1) return gl::TEXTURE_3D;
    return gl::TEXTURE_2D;
  }

  std::vector<CallArg> random_tex_param(std::uint32_t target) {
    static constexpr std::uint32_t pnames[] = {gl::TEXTURE_MIN_FILTER, gl::TEXTURE_MAG_FILTER,
                                               gl::TEXTURE_WRAP_S, gl::TEXTURE_WRAP_T};
    std::uint32_t pname = pnames[rng_.below(4)];
    std::uint32_t value;
    if (pname == gl::TEXTURE_MIN_FILTER || pname == gl::TEXTURE_MAG_FILTER)
      value = rng_.chance(0.5) ? gl::NEAREST : gl::LINEAR;
    else
      value = rng_.chance(0.5) ? gl::REPEAT : (rng_.chance(0.5) ? gl::CLAMP : gl::CLAMP_TO_EDGE);
    return {ArgValue::token(target), ArgValue::token(pname), ArgValue::token(value)};
  }

  template <typename Sink>
  void emit_assets(Sink&& sink) {
    assets_done_ = true;

    sink(GeneratedCall{FunctionId::EnableClientState, {ArgValue::token(gl::VERTEX_ARRAY)}});
    sink(GeneratedCall{FunctionId::EnableClientState, {ArgValue::token(gl::COLOR_ARRAY)}});
    sink(GeneratedCall{FunctionId::EnableClientState, {ArgValue::token(gl::TEXTURE_COORD_ARRAY)}});

    std::uint32_t remaining = profile_.textures_total;
    while (remaining > 0) {
      std::uint32_t batch = remaining < 16 ? remaining : 16;
      sink(GeneratedCall{FunctionId::GenTextures, {ArgValue::integer(batch)}});
      for (std::uint32_t i = 0; i < batch; ++i)
        textures_.push_back({next_vid_[static_cast<int>(ResourceKind::Texture)]++,
                             random_tex_target()});
      remaining -= batch;
    }
    for (const Texture& t : textures_) {
      sink(GeneratedCall{FunctionId::BindTexture,
                         {ArgValue::token(t.target), ArgValue::id_ref(ResourceKind::Texture, t.vid)}});
      sink(GeneratedCall{FunctionId::TexParameter,
                         {ArgValue::token(t.target), ArgValue::token(gl::TEXTURE_MIN_FILTER),
                          ArgValue::token(gl::LINEAR)}});
      sink(GeneratedCall{FunctionId::TexImage,
                         {ArgValue::token(t.target), ArgValue::integer(0),
                          rng_.bytes(profile_.upload_bytes)}});
    }

    constexpr std::uint32_t kStreamBuffers = 7, kStaticBuffers = 2;
    sink(GeneratedCall{FunctionId::GenBuffers, {ArgValue::integer(kStreamBuffers + kStaticBuffers)}});
    for (std::uint32_t i = 0; i < kStreamBuffers + kStaticBuffers; ++i) {
      std::uint64_t vid = next_vid_[static_cast<int>(ResourceKind::Buffer)]++;
      (i < kStreamBuffers ? stream_buffers_ : static_buffers_).push_back(vid);
    }
    for (std::uint64_t vid : static_buffers_) {
      sink(GeneratedCall{FunctionId::BindBuffer,
                         {ArgValue::token(gl::ELEMENT_ARRAY_BUFFER),
                          ArgValue::id_ref(ResourceKind::Buffer, vid)}});
      sink(GeneratedCall{FunctionId::BufferData,
                         {ArgValue::token(gl::ELEMENT_ARRAY_BUFFER),
                          rng_.bytes(profile_.upload_bytes), ArgValue::token(gl::STATIC_DRAW)}});
    }

    for (std::uint32_t p = 0; p < profile_.shader_programs; ++p) {
      std::uint64_t vert = next_vid_[static_cast<int>(ResourceKind::Shader)]++;
      std::uint64_t frag = next_vid_[static_cast<int>(ResourceKind::Shader)]++;
      std::uint64_t prog = next_vid_[static_cast<int>(ResourceKind::Program)]++;
      sink(GeneratedCall{FunctionId::CreateShader, {ArgValue::token(gl::VERTEX_SHADER)}});
      sink(GeneratedCall{FunctionId::ShaderSource,
                         {ArgValue::id_ref(ResourceKind::Shader, vert), shader_text(p, true)}});
      sink(GeneratedCall{FunctionId::CompileShader, {ArgValue::id_ref(ResourceKind::Shader, vert)}});
      sink(GeneratedCall{FunctionId::CreateShader, {ArgValue::token(gl::FRAGMENT_SHADER)}});
      sink(GeneratedCall{FunctionId::ShaderSource,
                         {ArgValue::id_ref(ResourceKind::Shader, frag), shader_text(p, false)}});
      sink(GeneratedCall{FunctionId::CompileShader, {ArgValue::id_ref(ResourceKind::Shader, frag)}});
      sink(GeneratedCall{FunctionId::CreateProgram, {}});
      sink(GeneratedCall{FunctionId::AttachShader,
                         {ArgValue::id_ref(ResourceKind::Program, prog),
                          ArgValue::id_ref(ResourceKind::Shader, vert)}});
      sink(GeneratedCall{FunctionId::AttachShader,
                         {ArgValue::id_ref(ResourceKind::Program, prog),
                          ArgValue::id_ref(ResourceKind::Shader, frag)}});
      sink(GeneratedCall{FunctionId::LinkProgram, {ArgValue::id_ref(ResourceKind::Program, prog)}});
      programs_.push_back(prog);
    }
    if (!programs_.empty())
      sink(GeneratedCall{FunctionId::UseProgram,
                         {ArgValue::id_ref(ResourceKind::Program, programs_[0])}});
  }

  template <typename Sink>
  void emit_state_write(Sink&& sink) {
    static constexpr std::uint32_t caps[] = {gl::BLEND, gl::DEPTH_TEST, gl::CULL_FACE,
                                             gl::LIGHTING, gl::SCISSOR_TEST, gl::STENCIL_TEST,
                                             gl::FOG};
    static constexpr std::uint32_t client_caps[] = {gl::VERTEX_ARRAY, gl::NORMAL_ARRAY,
                                                    gl::COLOR_ARRAY, gl::TEXTURE_COORD_ARRAY};
    static constexpr std::uint32_t modes[] = {gl::MODELVIEW, gl::PROJECTION, gl::TEXTURE};
    switch (rng_.below(4)) {
      case 0:
        sink(GeneratedCall{rng_.chance(0.5) ? FunctionId::Enable : FunctionId::Disable,
                           {ArgValue::token(caps[rng_.below(7)])}});
        break;
      case 1:
        sink(GeneratedCall{rng_.chance(0.7) ? FunctionId::EnableClientState
                                            : FunctionId::DisableClientState,
                           {ArgValue::token(client_caps[rng_.below(4)])}});
        break;
      case 2:
        sink(GeneratedCall{FunctionId::MatrixMode, {ArgValue::token(modes[rng_.below(3)])}});
        break;
      default: {
        std::vector<CallArg> m;
        m.reserve(16);
        for (int i = 0; i < 16; ++i) m.push_back(ArgValue::real(rng_.unit() * 2.0 - 1.0));
        sink(GeneratedCall{FunctionId::LoadMatrix, std::move(m)});
        break;
      }
    }
  }

  template <typename Sink>
  void emit_churn(Sink&& sink) {
    std::size_t slot = rng_.below(textures_.size());
    std::uint64_t dying = textures_[slot].vid;
    sink(GeneratedCall{FunctionId::DeleteTextures, {ArgValue::id_ref(ResourceKind::Texture, dying)}});
    std::uint64_t fresh_vid = next_vid_[static_cast<int>(ResourceKind::Texture)]++;
    std::uint32_t target = random_tex_target();
    textures_[slot] = {fresh_vid, target};
    sink(GeneratedCall{FunctionId::GenTextures, {ArgValue::integer(1)}});
    sink(GeneratedCall{FunctionId::BindTexture,
                       {ArgValue::token(target), ArgValue::id_ref(ResourceKind::Texture, fresh_vid)}});
    sink(GeneratedCall{FunctionId::TexImage,
                       {ArgValue::token(target), ArgValue::integer(0),
                        rng_.bytes(profile_.upload_bytes)}});
  }

  std::vector<std::uint8_t> shader_text(std::uint32_t program, bool vertex) {
    std::string src = vertex ? "void main() { gl_Position = mvp * vec4(pos, 1.0); } // v"
                             : "void main() { frag = texture(tex, uv); } // f";
    src += std::to_string(program);
    src += " seed ";
    src += std::to_string(profile_.seed);
    return {src.begin(), src.end()};
  }

  WorkloadProfile profile_;
  Rng rng_;
  bool assets_done_ = false;
  std::vector<Texture> textures_;
  std::vector<std::uint64_t> stream_buffers_;
  std::vector<std::uint64_t> static_buffers_;
  std::vector<std::uint64_t> programs_;
  std::array<std::uint64_t, kResourceKindCount> next_vid_{1, 1, 1, 1, 1};
};

// Feeds one generated call into a session.
inline std::vector<ReturnedId> feed(Session& session, const GeneratedCall& call) {
  return session.record(call.fn, call.args);
}

}  // namespace rpr
