#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rpr/category.hpp"
#include "rpr/trace_log.hpp"

namespace rpr {

// Log pruning: anchor at the last frame root, resolve implicit selectors,
// keep the last write per category plus the calls those writes depend on
// (selector binds, resource creation, shader/program lifecycle), and keep
// everything after the anchor verbatim. Dependencies are over-approximated
// where the exact set would be subtle; replay equivalence against the
// driver oracle is the correctness bar.

inline std::optional<std::uint64_t> find_last_root(const TraceLog& log) {
  for (auto it = log.records.rbegin(); it != log.records.rend(); ++it)
    if (classify(it->fn) == RoleTag::FrameRoot) return it->seq;
  return std::nullopt;
}

// Owner resolution for one target-addressed call (or LoadMatrix).
struct ResolvedSelector {
  std::uint64_t owner_vid = 0;  // 0 = unbound sink (or matrix mode value)
  std::optional<std::uint64_t> selector_seq;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> zero_chain;
  bool unresolved = false;
};

// seq -> resolution, for every TexParameter/TexImage/BufferData/LoadMatrix
// at seq <= up_to. LoadMatrix entries carry the matrix mode in owner_vid.
inline std::map<std::uint64_t, ResolvedSelector> resolve_selectors(const TraceLog& log,
                                                                   std::uint64_t up_to) {
  std::map<std::uint64_t, ResolvedSelector> out;
  SelectorContext ctx;
  for (const CallRecord& rec : log.records) {
    if (rec.seq > up_to) break;
    switch (rec.fn) {
      case FunctionId::TexParameter:
      case FunctionId::TexImage: {
        auto b = ctx.texture_binding(rec.args[0].enum_value);
        out[rec.seq] = {b.vid, b.bind_seq, b.zero_chain, !b.bind_seq && b.vid == 0};
        break;
      }
      case FunctionId::BufferData: {
        auto b = ctx.buffer_binding(rec.args[0].enum_value);
        out[rec.seq] = {b.vid, b.bind_seq, b.zero_chain, !b.bind_seq && b.vid == 0};
        break;
      }
      case FunctionId::LoadMatrix:
        out[rec.seq] = {ctx.matrix_mode, ctx.matrix_mode_seq, std::nullopt, false};
        break;
      default:
        break;
    }
    ctx.observe(rec);
  }
  return out;
}

struct LiveSet {
  enum class Why : std::uint8_t {
    LastWriteOf,
    SelectorFor,
    LifecycleOf,
    GenOf,
    FinalRoot,
    SuffixAfterRoot,
    CurrentBinding,
  };

  struct Reason {
    Why why = Why::LastWriteOf;
    CategoryKey category{};       // LastWriteOf
    std::uint64_t ref_seq = 0;    // SelectorFor
    ResourceKind kind = ResourceKind::Texture;  // LifecycleOf / GenOf
    std::uint64_t vid = 0;
  };

  std::set<std::uint64_t> keep;
  std::map<std::uint64_t, Reason> reasons;

  void add(std::uint64_t seq, Reason r) {
    if (keep.insert(seq).second) reasons.emplace(seq, r);
  }
};

inline LiveSet compute_live_set(const TraceLog& log, std::uint64_t up_to) {
  using Why = LiveSet::Why;
  LiveSet live;

  using Key = std::pair<ResourceKind, std::uint64_t>;
  std::map<Key, std::uint64_t> gen_seq;     // resource -> creating record
  std::map<Key, std::uint64_t> delete_seq;  // resource -> deleting record (<= up_to)
  std::map<std::uint64_t, std::set<std::uint64_t>> attached;        // program vid -> shader vids
  std::map<std::uint64_t, std::set<std::uint64_t>> link_snapshot;   // at last LinkProgram
  std::map<Key, std::vector<std::uint64_t>> lifecycle;              // Source/Compile, per shader
  struct ProgramStep {
    std::uint64_t seq;
    std::optional<std::uint64_t> shader_vid;  // set for AttachShader
  };
  std::map<std::uint64_t, std::vector<ProgramStep>> program_steps;

  struct LastWrite {
    std::uint64_t seq = 0;
    const CallRecord* rec = nullptr;
    std::optional<Key> owner;  // resource the write lands on (vid 0 = sink)
    ResolvedSelector sel;
  };
  std::map<CategoryKey, LastWrite> last_write;

  // Only the current epoch matters: everything at or before the last
  // ResetContext/DestroyContext is wiped state that replay must not rebuild.
  std::uint64_t epoch_begin = 0;  // first seq strictly after the wiping call
  std::optional<std::uint64_t> current_create;
  for (const CallRecord& rec : log.records) {
    if (rec.seq > up_to) break;
    if (rec.fn == FunctionId::ResetContext || rec.fn == FunctionId::DestroyContext)
      epoch_begin = rec.seq + 1;
    if (rec.fn == FunctionId::CreateContext) current_create = rec.seq;
  }

  auto selectors = resolve_selectors(log, up_to);
  SelectorContext ctx;

  for (const CallRecord& rec : log.records) {
    if (rec.seq > up_to) break;
    if (rec.seq < epoch_begin) continue;
    switch (classify(rec.fn)) {
      case RoleTag::ResourceGen:
        for (const ReturnedId& r : rec.returned_ids) gen_seq[{r.kind, r.vid}] = rec.seq;
        break;
      case RoleTag::ResourceDelete:
        for (const ArgValue& a : rec.args) delete_seq[{a.id.kind, a.id.vid}] = rec.seq;
        if (rec.fn == FunctionId::DeleteShader)
          for (auto& [pvid, shaders] : attached) shaders.erase(rec.args[0].id.vid);
        if (rec.fn == FunctionId::DeleteProgram) {
          attached.erase(rec.args[0].id.vid);
          link_snapshot.erase(rec.args[0].id.vid);
        }
        break;
      case RoleTag::LifecycleStep:
        switch (rec.fn) {
          case FunctionId::ShaderSource:
          case FunctionId::CompileShader:
            lifecycle[{ResourceKind::Shader, rec.args[0].id.vid}].push_back(rec.seq);
            break;
          case FunctionId::AttachShader: {
            std::uint64_t pvid = rec.args[0].id.vid, svid = rec.args[1].id.vid;
            attached[pvid].insert(svid);
            program_steps[pvid].push_back({rec.seq, svid});
            break;
          }
          case FunctionId::LinkProgram: {
            std::uint64_t pvid = rec.args[0].id.vid;
            link_snapshot[pvid] = attached[pvid];
            program_steps[pvid].push_back({rec.seq, std::nullopt});
            break;
          }
          default:
            break;
        }
        break;
      case RoleTag::StateSet: {
        if (rec.fn == FunctionId::ResetContext || rec.fn == FunctionId::DestroyContext) break;
        CategoryKey key = category_key(rec, ctx);
        LastWrite lw;
        lw.seq = rec.seq;
        lw.rec = &rec;
        auto it = selectors.find(rec.seq);
        if (it != selectors.end()) lw.sel = it->second;
        if (rec.fn == FunctionId::TexParameter || rec.fn == FunctionId::TexImage)
          lw.owner = Key{ResourceKind::Texture, lw.sel.owner_vid};
        else if (rec.fn == FunctionId::BufferData)
          lw.owner = Key{ResourceKind::Buffer, lw.sel.owner_vid};
        last_write[key] = lw;
        break;
      }
      case RoleTag::SelectorBind:
      case RoleTag::FrameRoot:
        break;
    }
    ctx.observe(rec);
  }

  auto is_live = [&](ResourceKind k, std::uint64_t vid) {
    return gen_seq.count({k, vid}) != 0 && delete_seq.count({k, vid}) == 0;
  };

  // Shaders a live program's last link captured: even if deleted since, the
  // snapshot is observable state, so their whole history (creation through
  // deletion) replays.
  std::set<std::uint64_t> retained_dead_shaders;
  for (const auto& [pvid, snap] : link_snapshot) {
    if (!is_live(ResourceKind::Program, pvid)) continue;
    for (std::uint64_t svid : snap)
      if (!is_live(ResourceKind::Shader, svid)) retained_dead_shaders.insert(svid);
  }
  auto shader_retained = [&](std::uint64_t svid) {
    return is_live(ResourceKind::Shader, svid) || retained_dead_shaders.count(svid) != 0;
  };

  // A slot that ended up 0 because its object was deleted only needs its
  // bind+delete pair replayed when some retained bind on the same target
  // would otherwise leave the binding nonzero. Collect candidates now,
  // decide after the base retention pass.
  struct PendingChain {
    bool texture;
    std::uint32_t target;
    std::pair<std::uint64_t, std::uint64_t> chain;  // (bind seq, delete seq)
    std::uint64_t for_seq;
  };
  std::vector<PendingChain> pending_chains;
  std::set<std::pair<bool, std::uint32_t>> nonzero_bind_retained;  // (is_texture, target)

  // (a)+(b): last write per category, with the selector it resolved through
  for (const auto& [key, lw] : last_write) {
    if (lw.owner && lw.owner->second != 0 && !is_live(lw.owner->first, lw.owner->second))
      continue;  // writes into deleted objects die with them
    live.add(lw.seq, {Why::LastWriteOf, key, 0, {}, 0});
    if (lw.sel.selector_seq) {
      live.add(*lw.sel.selector_seq, {Why::SelectorFor, {}, lw.seq, {}, 0});
      bool texture = lw.rec->fn == FunctionId::TexParameter || lw.rec->fn == FunctionId::TexImage;
      bool buffer = lw.rec->fn == FunctionId::BufferData;
      if ((texture || buffer) && lw.sel.owner_vid != 0)
        nonzero_bind_retained.insert({texture, lw.rec->args[0].enum_value});
    }
    if (lw.sel.zero_chain && lw.owner)
      pending_chains.push_back({lw.owner->first == ResourceKind::Texture,
                                lw.rec->args[0].enum_value, *lw.sel.zero_chain, lw.seq});
  }

  // (c)+(h): the binding state itself as of up_to: current binds, the matrix
  // mode, the current program.
  auto keep_binding_state = [&](const std::map<std::uint32_t, SelectorContext::Binding>& slots,
                                bool texture) {
    for (const auto& [target, b] : slots) {
      if (b.vid != 0 && b.bind_seq) {
        live.add(*b.bind_seq, {Why::CurrentBinding, {}, 0, {}, b.vid});
        nonzero_bind_retained.insert({texture, target});
      } else if (b.vid == 0 && b.bind_seq) {
        live.add(*b.bind_seq, {Why::CurrentBinding, {}, 0, {}, 0});  // explicit bind-to-0
      } else if (b.zero_chain) {
        pending_chains.push_back({texture, target, *b.zero_chain, up_to});
      }
    }
  };
  keep_binding_state(ctx.texture_binding_at, true);
  keep_binding_state(ctx.buffer_binding_at, false);
  if (ctx.matrix_mode_seq)
    live.add(*ctx.matrix_mode_seq, {Why::CurrentBinding, {}, 0, {}, 0});
  if (ctx.current_program.bind_seq) {
    // last UseProgram: dropped only if it addresses a program that died
    if (ctx.current_program.vid == 0 || is_live(ResourceKind::Program, ctx.current_program.vid))
      live.add(*ctx.current_program.bind_seq, {Why::CurrentBinding, {}, 0, {}, 0});
  }

  // (d): creation calls of live resources
  for (const auto& [key, seq] : gen_seq)
    if (delete_seq.count(key) == 0) live.add(seq, {Why::GenOf, {}, 0, key.first, key.second});

  // (e): full ordered lifecycle of live shaders and programs, plus the whole
  // history of snapshot-retained dead shaders
  for (const auto& [key, seqs] : lifecycle) {
    if (key.first == ResourceKind::Shader && shader_retained(key.second) &&
        gen_seq.count(key))
      for (std::uint64_t s : seqs) live.add(s, {Why::LifecycleOf, {}, 0, key.first, key.second});
  }
  for (const auto& [pvid, steps] : program_steps) {
    if (!is_live(ResourceKind::Program, pvid)) continue;
    for (const ProgramStep& st : steps) {
      if (st.shader_vid && !shader_retained(*st.shader_vid)) continue;
      live.add(st.seq, {Why::LifecycleOf, {}, 0, ResourceKind::Program, pvid});
    }
  }
  for (std::uint64_t svid : retained_dead_shaders) {
    Key k{ResourceKind::Shader, svid};
    if (auto it = gen_seq.find(k); it != gen_seq.end())
      live.add(it->second, {Why::GenOf, {}, 0, ResourceKind::Shader, svid});
    if (auto it = delete_seq.find(k); it != delete_seq.end())
      live.add(it->second, {Why::LifecycleOf, {}, 0, ResourceKind::Shader, svid});
  }

  // (i): the context creation this epoch runs in
  if (current_create && *current_create >= epoch_begin)
    live.add(*current_create, {Why::GenOf, {}, 0, ResourceKind::Context, 0});

  // (f): the anchor root
  live.add(up_to, {Why::FinalRoot, {}, 0, {}, 0});

  // (g): suffix after the anchor, verbatim
  for (const CallRecord& rec : log.records)
    if (rec.seq > up_to) live.add(rec.seq, {Why::SuffixAfterRoot, {}, 0, {}, 0});

  // Deferred zero-chains: replay the bind+delete pair only where a retained
  // bind would otherwise leave the target pointing at something.
  for (const PendingChain& pc : pending_chains)
    if (nonzero_bind_retained.count({pc.texture, pc.target})) {
      live.add(pc.chain.first, {Why::SelectorFor, {}, pc.for_seq, {}, 0});
      live.add(pc.chain.second, {Why::SelectorFor, {}, pc.for_seq, {}, 0});
    }

  // Closure: a kept creation that also returns since-deleted ids must keep
  // the deletes that re-kill them on replay; a kept delete needs the creation
  // of every id it names. Iterate to fixpoint.
  std::map<std::uint64_t, const CallRecord*> by_seq;
  for (const CallRecord& rec : log.records)
    if (rec.seq <= up_to && rec.seq >= epoch_begin) by_seq[rec.seq] = &rec;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::uint64_t> snapshot(live.keep.begin(), live.keep.end());
    for (std::uint64_t seq : snapshot) {
      auto it = by_seq.find(seq);
      if (it == by_seq.end()) continue;
      const CallRecord& rec = *it->second;
      if (classify(rec.fn) == RoleTag::ResourceGen) {
        for (const ReturnedId& r : rec.returned_ids) {
          auto d = delete_seq.find({r.kind, r.vid});
          if (d != delete_seq.end() && !live.keep.count(d->second)) {
            live.add(d->second, {Why::LifecycleOf, {}, 0, r.kind, r.vid});
            changed = true;
          }
        }
      } else if (classify(rec.fn) == RoleTag::ResourceDelete) {
        for (const ArgValue& a : rec.args) {
          auto g = gen_seq.find({a.id.kind, a.id.vid});
          if (g != gen_seq.end() && !live.keep.count(g->second)) {
            live.add(g->second, {Why::GenOf, {}, 0, a.id.kind, a.id.vid});
            changed = true;
          }
        }
      }
    }
  }

  return live;
}

inline TraceLog prune(const TraceLog& log) {
  auto root = find_last_root(log);
  if (!root) return log;  // nothing to anchor on, nothing is pruned
  LiveSet live = compute_live_set(log, *root);
  TraceLog out;
  out.records.reserve(live.keep.size());
  for (const CallRecord& rec : log.records)
    if (live.keep.count(rec.seq)) out.records.push_back(rec);
  for (const CallRecord& rec : out.records)
    for (const ArgValue& a : rec.args)
      if (a.type == ArgValue::Type::Blob) out.blobs.put(log.blobs.get(a.blob.digest));
  return out;
}

}  // namespace rpr
