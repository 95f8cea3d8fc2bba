// rpr — record, prune and replay graphics-style call logs, with
// checkpoint/restore against the built-in simulated driver.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rpr/rpr.hpp"

namespace {

using namespace rpr;

int log_level() {
  static int level = [] {
    const char* env = std::getenv("RPR_LOG_LEVEL");
    if (!env) return 0;
    std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[rpr] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[rpr:debug] " << msg << "\n";
}

enum class Format { Auto, Text, Binary };

Format format_from_flag(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "binary") return Format::Binary;
  if (s.empty()) return Format::Auto;
  throw Error(Errc::Io, "unknown format '" + s + "'");
}

Format format_for_path(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  if (ext == ".rprt") return Format::Text;
  if (ext == ".rprb") return Format::Binary;
  throw Error(Errc::Io, "cannot tell format of '" + p.string() + "' (use .rprt/.rprb or --format)");
}

TraceLog load_log(const std::filesystem::path& path) {
  auto bytes = read_file(path);
  if (bytes.size() >= 4 && bytes[0] == 'R' && bytes[1] == 'P' && bytes[2] == 'R' &&
      bytes[3] == 'L')
    return parse_binary(bytes);
  return parse_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void save_log(const TraceLog& log, const std::filesystem::path& path, Format fmt) {
  if (fmt == Format::Auto) fmt = format_for_path(path);
  if (fmt == Format::Text) {
    std::string text = encode_text(log);
    write_file(path, std::span<const std::uint8_t>(
                         reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  } else {
    auto bytes = encode_binary(log);
    write_file(path, bytes);
  }
}

WorkloadProfile profile_from_options(std::uint64_t seed, std::uint32_t frames,
                                     const std::string& profile_path) {
  WorkloadProfile p;
  if (!profile_path.empty()) p = WorkloadProfile::from_file(profile_path);
  if (seed != 0) p.seed = seed;
  if (frames != 0) p.frames = frames;
  return p;
}

Session record_session(const WorkloadProfile& profile, bool background_prune,
                       std::uint32_t prune_every) {
  SessionOptions opts;
  opts.background_prune = background_prune;
  if (prune_every != 0) opts.prune_every_n_frames = prune_every;
  Session session(opts);
  Workload workload(profile);
  auto sink = [&](const GeneratedCall& c) { feed(session, c); };
  workload.emit_context(sink);
  for (std::uint32_t f = 0; f < profile.frames; ++f) workload.emit_frame(sink);
  session.finish_pending_prune();
  log_info("recorded " + std::to_string(session.log().records.size()) + " calls over " +
           std::to_string(profile.frames) + " frames");
  return session;
}

// Post-restore recording that only refers to ids the session hands back.
void continue_frames(Session& session, std::uint64_t seed, std::uint32_t frames) {
  Rng rng(seed ^ 0xABCDEF);
  for (std::uint32_t f = 0; f < frames; ++f) {
    session.record(FunctionId::ClearColor,
                   {ArgValue::real(rng.unit()), ArgValue::real(rng.unit()),
                    ArgValue::real(rng.unit()), ArgValue::real(1.0)});
    if (rng.chance(0.5)) {
      auto ids = session.record(FunctionId::GenTextures, {ArgValue::integer(1)});
      session.record(FunctionId::BindTexture,
                     {ArgValue::token(gl::TEXTURE_2D),
                      ArgValue::id_ref(ResourceKind::Texture, ids[0].vid)});
      session.record(FunctionId::TexImage,
                     {ArgValue::token(gl::TEXTURE_2D), ArgValue::integer(0), rng.bytes(256)});
    }
    session.record(FunctionId::Draw, {ArgValue::token(gl::TRIANGLES), ArgValue::integer(0),
                                      ArgValue::integer(3)});
    session.record(FunctionId::SwapBuffers, {});
  }
}

std::uint64_t now_ms() {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::system_clock::now().time_since_epoch())
                                        .count());
}

int run(int argc, char** argv) {
  CLI::App app{"record-prune-replay engine for graphics-style call streams"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::uint32_t frames = 0;
  std::string profile_path, format_flag, input, output, samples_flag;
  bool background_prune = false, simulate_resume = false, table_output = false;
  std::uint32_t prune_every = 0, continue_n = 0;

  auto add_profile_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "workload seed");
    cmd->add_option("--frames", frames, "frames to generate");
    cmd->add_option("--profile", profile_path, "workload profile file (key=value)");
  };

  auto* cmd_record = app.add_subcommand("record", "generate a workload and record its log");
  add_profile_flags(cmd_record);
  cmd_record->add_option("-o,--output", output, "output log (.rprt/.rprb)")->required();
  cmd_record->add_option("--format", format_flag, "output format: text|binary");
  cmd_record->add_flag("--background-prune", background_prune, "prune in the background while recording");
  cmd_record->add_option("--prune-every", prune_every, "frame-roots between background prunes");

  auto* cmd_prune = app.add_subcommand("prune", "prune a log");
  cmd_prune->add_option("-i,--input", input, "input log")->required();
  cmd_prune->add_option("-o,--output", output, "output log")->required();
  cmd_prune->add_option("--format", format_flag, "output format: text|binary");

  auto* cmd_replay = app.add_subcommand("replay", "replay a log and print digests");
  cmd_replay->add_option("-i,--input", input, "input log")->required();

  std::string against;
  auto* cmd_verify = app.add_subcommand("verify", "check pruned replay matches full replay");
  cmd_verify->add_option("-i,--input", input, "input log")->required();
  cmd_verify->add_option("--against", against,
                         "compare this pruned log instead of pruning the input");

  auto* cmd_checkpoint = app.add_subcommand("checkpoint", "write a checkpoint image");
  add_profile_flags(cmd_checkpoint);
  cmd_checkpoint->add_option("-i,--input", input, "record from this log instead of generating");
  cmd_checkpoint->add_option("-o,--output", output, "output image (.rpck)")->required();
  cmd_checkpoint->add_flag("--background-prune", background_prune, "prune in the background while recording");
  cmd_checkpoint->add_flag("--simulate-resume", simulate_resume,
                           "after writing, reset the driver and replay the log for timing");

  auto* cmd_restore = app.add_subcommand("restore", "restore a session from a checkpoint image");
  cmd_restore->add_option("-i,--input", input, "input image (.rpck)")->required();
  cmd_restore->add_option("--continue", continue_n, "record this many extra frames after restore");
  cmd_restore->add_option("-o,--output", output, "write the session log here afterwards");
  cmd_restore->add_option("--format", format_flag, "output format: text|binary");
  cmd_restore->add_option("--seed", seed, "real-id seed for the fresh driver");

  auto* cmd_bench = app.add_subcommand("bench", "log growth / prune timing report (CSV)");
  add_profile_flags(cmd_bench);
  cmd_bench->add_option("--samples", samples_flag, "comma-separated frame sample points");
  cmd_bench->add_flag("--table", table_output, "pretty-print instead of CSV");

  auto* cmd_convert = app.add_subcommand("convert", "convert a log between text and binary");
  cmd_convert->add_option("-i,--input", input, "input log")->required();
  cmd_convert->add_option("-o,--output", output, "output log")->required();
  cmd_convert->add_option("--format", format_flag, "output format: text|binary");

  CLI11_PARSE(app, argc, argv);

  if (cmd_record->parsed()) {
    Session session = record_session(profile_from_options(seed, frames, profile_path),
                                     background_prune, prune_every);
    save_log(session.log(), output, format_from_flag(format_flag));
    std::cout << "records " << session.log().records.size() << "\n";
    std::cout << "state " << to_hex(session.current_state_digest()) << "\n";
    return 0;
  }

  if (cmd_prune->parsed()) {
    TraceLog log = load_log(input);
    TraceLog pruned = prune(log);
    save_log(pruned, output, format_from_flag(format_flag));
    std::cout << "records " << log.records.size() << " -> " << pruned.records.size() << "\n";
    return 0;
  }

  if (cmd_replay->parsed()) {
    TraceLog log = load_log(input);
    ReplayOutcome out = replay(log);
    std::cout << "records " << log.records.size() << "\n";
    std::cout << "frames " << out.driver.frame_count << "\n";
    std::cout << "state " << to_hex(out.state) << "\n";
    std::cout << "frame " << to_hex(out.frame) << "\n";
    return 0;
  }

  if (cmd_verify->parsed()) {
    TraceLog log = load_log(input);
    ReplayOutcome full = replay(log, 1);
    ReplayOutcome pruned = replay(against.empty() ? prune(log) : load_log(against), 1000003);
    std::cout << "full   state " << to_hex(full.state) << " frame " << to_hex(full.frame) << "\n";
    std::cout << "pruned state " << to_hex(pruned.state) << " frame " << to_hex(pruned.frame)
              << "\n";
    if (full.state != pruned.state || full.frame != pruned.frame) {
      std::cout << "MISMATCH\n";
      return 2;
    }
    std::cout << "OK\n";
    return 0;
  }

  if (cmd_checkpoint->parsed()) {
    Session session = input.empty()
                          ? record_session(profile_from_options(seed, frames, profile_path),
                                           background_prune, prune_every)
                          : Session::from_log(load_log(input));
    CheckpointImage img = session.checkpoint(output, now_ms());
    std::cout << "image " << output << " (" << std::filesystem::file_size(output) << " bytes, "
              << img.pruned_log.records.size() << " records)\n";
    std::cout << "state " << to_hex(img.state) << "\n";
    if (simulate_resume) {
      auto took = session.simulate_resume();
      std::cout << "resume replay " << took.count() << " us\n";
    }
    return 0;
  }

  if (cmd_restore->parsed()) {
    SessionOptions opts;
    if (seed != 0) opts.real_id_seed = seed;
    Session session = Session::restore(input, opts);
    std::cout << "restored " << session.log().records.size() << " records, frame count "
              << session.frame_count() << "\n";
    std::cout << "state " << to_hex(session.current_state_digest()) << "\n";
    if (continue_n > 0) {
      continue_frames(session, seed + 1, continue_n);
      std::cout << "continued to " << session.log().records.size() << " records, frame count "
                << session.frame_count() << "\n";
    }
    if (!output.empty()) save_log(session.log(), output, format_from_flag(format_flag));
    return 0;
  }

  if (cmd_bench->parsed()) {
    WorkloadProfile p = profile_from_options(seed, frames, profile_path);
    std::vector<std::uint32_t> samples;
    if (!samples_flag.empty()) {
      std::size_t pos = 0;
      while (pos < samples_flag.size()) {
        auto comma = samples_flag.find(',', pos);
        std::string tok = samples_flag.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        samples.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
        pos = comma == std::string::npos ? samples_flag.size() : comma + 1;
      }
    } else {
      for (std::uint32_t f : {5u, 10u, 20u, 30u, 45u, 60u, 75u, 90u, 105u, 120u})
        if (f <= p.frames) samples.push_back(f);
    }
    BenchReport report = run_bench(p, samples);
    std::cout << (table_output ? report.to_table() : report.to_csv());
    return 0;
  }

  if (cmd_convert->parsed()) {
    TraceLog log = load_log(input);
    save_log(log, output, format_from_flag(format_flag));
    log_debug("converted " + input + " -> " + output);
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rpr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == rpr::Errc::VerifyMismatch) return 2;
    return e.is_format_error() ? 3 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
