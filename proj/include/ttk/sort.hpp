#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace ttk {

// Sorts of an algebraic dependent type theory: {ctx, tm} x N.
// (ty,n) is an alias for (ctx,n+1); resolution happens in make_ty and is
// idempotent because ty-sorts are never stored as a distinct kind.
enum class SortKind : uint8_t { Ctx, Tm };

struct Sort {
  SortKind kind = SortKind::Ctx;
  int level = 0;

  bool operator==(const Sort& o) const { return kind == o.kind && level == o.level; }
  bool operator!=(const Sort& o) const { return !(*this == o); }
  bool operator<(const Sort& o) const {
    if (kind != o.kind) return kind < o.kind;
    return level < o.level;
  }
};

inline Sort make_ctx(int n) { return Sort{SortKind::Ctx, n}; }
inline Sort make_tm(int n) { return Sort{SortKind::Tm, n}; }
inline Sort make_ty(int n) { return Sort{SortKind::Ctx, n + 1}; }

inline bool is_ty(Sort s) { return s.kind == SortKind::Ctx && s.level >= 1; }
// Level as a ty-sort: (ctx,n+1) viewed as (ty,n).
inline int ty_level(Sort s) { return s.level - 1; }

// The "one level down" sort d_p: d_tm(n) = (ty,n), d_ty(n) = (ctx,n).
// Undefined for (ctx,0), which has no boundary.
inline bool has_boundary(Sort s) {
  return s.kind == SortKind::Tm || (s.kind == SortKind::Ctx && s.level >= 1);
}
inline Sort boundary_sort(Sort s) {
  if (s.kind == SortKind::Tm) return make_ty(s.level);
  if (s.level >= 1) return make_ctx(s.level - 1);
  throw std::invalid_argument("boundary_sort: (ctx,0) has no boundary");
}

std::string show_sort(Sort s);

}  // namespace ttk

template <>
struct std::hash<ttk::Sort> {
  size_t operator()(const ttk::Sort& s) const {
    return (static_cast<size_t>(s.kind) << 24) ^ static_cast<size_t>(s.level);
  }
};
