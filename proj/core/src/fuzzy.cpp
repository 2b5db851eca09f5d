#include "pfsim/fuzzy.hpp"

#include <algorithm>
#include <unordered_map>

#include "pfsim/interfaces.hpp"

namespace pfsim {

FuzzyConfig::FuzzyConfig(LatticePtr lattice, std::vector<std::uint8_t> blue)
    : lat_(std::move(lattice)), blue_(std::move(blue)) {
  if (static_cast<int>(blue_.size()) != lat_->num_vertices())
    throw std::invalid_argument("FuzzyConfig: label vector has the wrong length");
}

std::vector<int> FuzzyConfig::blue_sites() const {
  std::vector<int> out;
  for (int s = 0; s < lat_->num_sites(); ++s)
    if (blue_[s]) out.push_back(s);
  return out;
}

FuzzyConfig project_bf(const SpinConfig& sigma) {
  std::vector<std::uint8_t> b(sigma.all().size());
  for (std::size_t v = 0; v < b.size(); ++v) b[v] = sigma.all()[v] == kBlue;
  return FuzzyConfig(sigma.lattice_ptr(), std::move(b));
}

void EventRegistry::add(Event e) {
  if (contains(e.name)) throw std::invalid_argument("EventRegistry: duplicate event " + e.name);
  events_.push_back(std::move(e));
}

const Event& EventRegistry::get(const std::string& name) const {
  for (const auto& e : events_)
    if (e.name == name) return e;
  throw std::out_of_range("EventRegistry: unregistered event " + name);
}

bool EventRegistry::contains(const std::string& name) const {
  return std::any_of(events_.begin(), events_.end(), [&](const Event& e) { return e.name == name; });
}

std::vector<std::string> EventRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& e : events_) out.push_back(e.name);
  return out;
}

namespace {

std::string site_str(int i, int j, int k) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

int lookup(const SpinConfig& s, int i, int j, int k) { return s.domain().vertex_id(i, j, k); }

bool in_vhat_blue(const SpinConfig& s, int i, int j, int k) {
  int v = lookup(s, i, j, k);
  if (v < 0) return false;
  VertexRegion r = augment(s.domain(), potts_cluster(s, PottsSide::blue));
  return r.contains(v);
}

}  // namespace

Event event_site_blue(int i, int j, int k) {
  return {"site_blue" + site_str(i, j, k),
          [=](const SpinConfig& s) {
            int v = lookup(s, i, j, k);
            return v >= 0 && s[v] == kBlue;
          },
          true, true, false};
}

Event event_site_red(int i, int j, int k) {
  return {"site_red" + site_str(i, j, k),
          [=](const SpinConfig& s) {
            int v = lookup(s, i, j, k);
            return v >= 0 && s[v] == s.lattice().bc().red;
          },
          false, false, false};
}

Event event_in_vhat_blue(int i, int j, int k) {
  return {"in_vhat_blue" + site_str(i, j, k), [=](const SpinConfig& s) { return in_vhat_blue(s, i, j, k); },
          true, true, true};
}

Event event_not_in_vhat_blue(int i, int j, int k) {
  return {"not_in_vhat_blue" + site_str(i, j, k),
          [=](const SpinConfig& s) { return !in_vhat_blue(s, i, j, k); }, false, true, true};
}

Event event_max_height_at_least(int h) {
  return {"max_height>=" + std::to_string(h),
          [=](const SpinConfig& s) {
            InterfaceSet I = extract_potts_interface(s, PottsSide::blue);
            ColumnHeights c = I.heights(s.domain());
            for (int v : c.max2)
              if (v != kNoHeight && v >= 2 * h) return true;
            return false;
          },
          true, true, true};
}

Event event_level_set_count(int h, int c) {
  return {"level_set_count(" + std::to_string(h) + ")>=" + std::to_string(c),
          [=](const SpinConfig& s) {
            InterfaceSet I = extract_potts_interface(s, PottsSide::blue);
            ColumnHeights hts = I.heights(s.domain());
            int cnt = 0;
            for (int v : hts.max2)
              if (v != kNoHeight && v >= 2 * h) ++cnt;
            return cnt >= c;
          },
          true, true, true};
}

Event event_all_blue() {
  return {"all_blue",
          [](const SpinConfig& s) {
            for (int v = 0; v < s.num_sites(); ++v)
              if (s[v] != kBlue) return false;
            return true;
          },
          true, true, false};
}

Event event_vhat_covers_upper_half() {
  return {"vhat_covers_upper_half",
          [](const SpinConfig& s) {
            const Domain& d = s.domain();
            VertexRegion r = augment(d, potts_cluster(s, PottsSide::blue));
            for (int v = 0; v < d.num_sites(); ++v)
              if (d.coord(v).k >= 0 && !r.contains(v)) return false;
            return true;
          },
          true, true, true};
}

Event event_full() {
  return {"full", [](const SpinConfig&) { return true; }, true, true, true};
}

EventRegistry EventRegistry::standard() {
  EventRegistry r;
  r.add(event_full());
  r.add(event_site_blue(0, 0, 0));
  r.add(event_site_blue(-1, 0, 0));
  r.add(event_in_vhat_blue(0, 0, 0));
  r.add(event_in_vhat_blue(-1, -1, 0));
  r.add(event_max_height_at_least(1));
  r.add(event_level_set_count(1, 2));
  r.add(event_all_blue());
  r.add(event_vhat_covers_upper_half());
  r.add(event_site_red(0, 0, 0));
  r.add(event_not_in_vhat_blue(0, 0, 0));
  return r;
}

bool is_blue_increasing_witness(const EventFn& event, const SpinConfig& sigma) {
  if (!event(sigma)) return false;
  SpinConfig t = sigma;
  for (int s = 0; s < sigma.num_sites(); ++s) {
    if (sigma[s] == kBlue) continue;
    t.set(s, kBlue);
    bool still = event(t);
    t.set(s, sigma[s]);
    if (!still) return true;
  }
  return false;
}

Certification certify(const Event& e, const LatticePtr& lattice, int q) {
  const int V = lattice->num_sites();
  if (V > 64) throw EnumerationCapError("certify: more than 64 interior sites");
  Certification c;
  c.event = e.name;
  std::unordered_map<std::uint64_t, bool> by_blue, by_vhat;
  const Domain& d = lattice->domain();
  for_each_coloring(lattice, q, [&](const SpinConfig& s) {
    ++c.configs;
    const bool val = e.eval(s);
    if (c.increasing && is_blue_increasing_witness(e.eval, s)) c.increasing = false;
    std::uint64_t blue = 0, vhat = 0;
    for (int v = 0; v < V; ++v)
      if (s[v] == kBlue) blue |= std::uint64_t{1} << v;
    auto [it, fresh] = by_blue.emplace(blue, val);
    if (!fresh && it->second != val) c.fuzzy_measurable = false;
    if (c.vhat_measurable) {
      VertexRegion r = augment(d, potts_cluster(s, PottsSide::blue));
      for (int v = 0; v < V; ++v)
        if (r.contains(v)) vhat |= std::uint64_t{1} << v;
      auto [jt, fresh2] = by_vhat.emplace(vhat, val);
      if (!fresh2 && jt->second != val) c.vhat_measurable = false;
    }
  });
  return c;
}

}  // namespace pfsim
