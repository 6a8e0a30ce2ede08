#include "histslice/line_diff.hpp"

#include <stdexcept>
#include <string_view>
#include <unordered_map>

namespace histslice {

namespace {

using Seq = std::vector<int>;

struct Snake {
  std::size_t x0, y0, x1, y1;
};

class MyersDiff {
public:
  MyersDiff(const Seq &a, const Seq &b) : a_(a), b_(b) {}

  /// Appends matched (old index, new index) pairs in increasing order.
  void run(std::vector<std::pair<std::size_t, std::size_t>> &matches) {
    matches_ = &matches;
    recurse(0, a_.size(), 0, b_.size());
  }

private:
  void recurse(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
    while (a0 < a1 && b0 < b1 && a_[a0] == b_[b0])
      matches_->emplace_back(a0++, b0++);
    std::size_t suffix = 0;
    while (a0 < a1 && b0 < b1 && a_[a1 - 1] == b_[b1 - 1]) {
      --a1;
      --b1;
      ++suffix;
    }
    if (a0 < a1 && b0 < b1) {
      Snake s = middle_snake(a0, a1, b0, b1);
      recurse(a0, a0 + s.x0, b0, b0 + s.y0);
      for (std::size_t x = s.x0, y = s.y0; x < s.x1; ++x, ++y)
        matches_->emplace_back(a0 + x, b0 + y);
      recurse(a0 + s.x1, a1, b0 + s.y1, b1);
    }
    for (std::size_t i = 0; i < suffix; ++i)
      matches_->emplace_back(a1 + i, b1 + i);
  }

  // Classic forward/reverse search for the middle snake, in coordinates
  // relative to (a0, b0).
  Snake middle_snake(std::size_t a0, std::size_t a1, std::size_t b0,
                     std::size_t b1) {
    const long n = static_cast<long>(a1 - a0);
    const long m = static_cast<long>(b1 - b0);
    const long delta = n - m;
    const bool odd = (delta & 1) != 0;
    const long max_d = (n + m + 1) / 2;
    const long offset = max_d + 1;
    std::vector<long> vf(2 * offset + 1, 0), vb(2 * offset + 1, 0);

    auto fwd_eq = [&](long x, long y) {
      return a_[a0 + x] == b_[b0 + y];
    };
    auto rev_eq = [&](long x, long y) {
      return a_[a1 - 1 - x] == b_[b1 - 1 - y];
    };

    for (long d = 0; d <= max_d; ++d) {
      for (long k = -d; k <= d; k += 2) {
        long x;
        if (k == -d || (k != d && vf[offset + k - 1] < vf[offset + k + 1]))
          x = vf[offset + k + 1];
        else
          x = vf[offset + k - 1] + 1;
        long y = x - k;
        const long sx = x, sy = y;
        while (x < n && y < m && fwd_eq(x, y)) {
          ++x;
          ++y;
        }
        vf[offset + k] = x;
        const long c = delta - k;
        if (odd && c >= -(d - 1) && c <= d - 1 && x + vb[offset + c] >= n)
          return {std::size_t(sx), std::size_t(sy), std::size_t(x),
                  std::size_t(y)};
      }
      for (long k = -d; k <= d; k += 2) {
        long x;
        if (k == -d || (k != d && vb[offset + k - 1] < vb[offset + k + 1]))
          x = vb[offset + k + 1];
        else
          x = vb[offset + k - 1] + 1;
        long y = x - k;
        const long sx = x, sy = y;
        while (x < n && y < m && rev_eq(x, y)) {
          ++x;
          ++y;
        }
        vb[offset + k] = x;
        const long c = delta - k;
        if (!odd && c >= -d && c <= d && x + vf[offset + c] >= n)
          return {std::size_t(n - x), std::size_t(m - y), std::size_t(n - sx),
                  std::size_t(m - sy)};
      }
    }
    throw std::logic_error("middle snake not found");
  }

  const Seq &a_;
  const Seq &b_;
  std::vector<std::pair<std::size_t, std::size_t>> *matches_ = nullptr;
};

} // namespace

std::vector<Hunk> diff_lines(const std::vector<std::string> &before,
                             const std::vector<std::string> &after) {
  std::unordered_map<std::string_view, int> ids;
  auto intern = [&](const std::vector<std::string> &lines) {
    Seq out;
    out.reserve(lines.size());
    for (const auto &line : lines)
      out.push_back(ids.try_emplace(line, int(ids.size())).first->second);
    return out;
  };
  const Seq a = intern(before);
  const Seq b = intern(after);

  std::vector<std::pair<std::size_t, std::size_t>> matches;
  MyersDiff(a, b).run(matches);
  matches.emplace_back(a.size(), b.size());

  std::vector<Hunk> hunks;
  std::size_t i = 0, j = 0;
  for (auto [mi, mj] : matches) {
    if (mi > i || mj > j) {
      Hunk h;
      h.old_start = i + 1;
      h.old_len = mi - i;
      h.new_start = j + 1;
      h.new_len = mj - j;
      h.old_lines.assign(before.begin() + long(i), before.begin() + long(mi));
      h.new_lines.assign(after.begin() + long(j), after.begin() + long(mj));
      hunks.push_back(std::move(h));
    }
    i = mi + 1;
    j = mj + 1;
  }
  return hunks;
}

std::vector<std::string> apply_hunks(const std::vector<std::string> &before,
                                     const std::vector<Hunk> &hunks) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (const auto &h : hunks) {
    const std::size_t start = h.old_start - 1;
    if (start < pos || start + h.old_len > before.size())
      throw std::invalid_argument("hunk out of range");
    out.insert(out.end(), before.begin() + long(pos),
               before.begin() + long(start));
    for (std::size_t k = 0; k < h.old_len; ++k)
      if (before[start + k] != h.old_lines[k])
        throw std::invalid_argument("hunk pre-image mismatch");
    out.insert(out.end(), h.new_lines.begin(), h.new_lines.end());
    pos = start + h.old_len;
  }
  out.insert(out.end(), before.begin() + long(pos), before.end());
  return out;
}

} // namespace histslice
