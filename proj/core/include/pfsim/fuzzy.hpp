#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfsim/potts.hpp"

namespace pfsim {

// Blue / fuzzy labels on every vertex id; boundary labels follow the bc
// (blue stays blue, every other color is fuzzy).
class FuzzyConfig {
 public:
  FuzzyConfig(LatticePtr lattice, std::vector<std::uint8_t> blue);

  const Lattice& lattice() const { return *lat_; }
  bool blue(int v) const { return blue_[v] != 0; }
  const std::vector<std::uint8_t>& labels() const { return blue_; }
  // Interior blue sites, ascending.
  std::vector<int> blue_sites() const;
  bool operator==(const FuzzyConfig& o) const { return blue_ == o.blue_; }

 private:
  LatticePtr lat_;
  std::vector<std::uint8_t> blue_;
};

FuzzyConfig project_bf(const SpinConfig& sigma);

using EventFn = std::function<bool(const SpinConfig&)>;

// Declared properties; certify() checks them by exhaustion.
struct Event {
  std::string name;
  EventFn eval;
  bool increasing = false;        // in the set of blue vertices
  bool fuzzy_measurable = false;  // function of the blue set only
  bool vhat_measurable = false;   // function of the augmented blue region only
};

class EventRegistry {
 public:
  void add(Event e);
  const Event& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<Event>& events() const { return events_; }
  std::vector<std::string> names() const;

  // Events used by the monotonicity and FKG checks, plus negative controls.
  static EventRegistry standard();

 private:
  std::vector<Event> events_;
};

// Named event constructors.  Sites are given by (i, j, k) coordinates so
// the same event can be evaluated on a floor box and on a slab.
Event event_site_blue(int i, int j, int k);
Event event_site_red(int i, int j, int k);
Event event_in_vhat_blue(int i, int j, int k);
Event event_not_in_vhat_blue(int i, int j, int k);
// max over columns of the top height of I_blue is at least h.
Event event_max_height_at_least(int h);
// At least c columns have top I_blue height at least h.
Event event_level_set_count(int h, int c);
Event event_all_blue();
Event event_vhat_covers_upper_half();
Event event_full();

// True when recoloring some single non-blue site blue turns the event from
// true to false (a witness that the event is not blue-increasing).
bool is_blue_increasing_witness(const EventFn& event, const SpinConfig& sigma);

struct Certification {
  std::string event;
  bool increasing = true;
  bool fuzzy_measurable = true;
  bool vhat_measurable = true;
  std::int64_t configs = 0;
  bool matches(const Event& e) const {
    return increasing == e.increasing && fuzzy_measurable == e.fuzzy_measurable &&
           vhat_measurable == e.vhat_measurable;
  }
};

struct CertificationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exhaustive scan over all q^V colorings of the lattice.
Certification certify(const Event& e, const LatticePtr& lattice, int q);

}  // namespace pfsim
