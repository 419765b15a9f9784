#pragma once

// Parameter sweep shared by the property tests and the acceptance run.

#include <cmath>
#include <string>
#include <vector>

#include "riskbound/catalog.hpp"

namespace riskbound::testing {

struct Case {
  std::string family;
  ParamMap params;
};

inline std::vector<Case> family_sweep() {
  std::vector<Case> out;
  auto add = [&](const std::string& f, ParamMap p) { out.push_back({f, std::move(p)}); };
  const std::vector<double> tsallis{0.6, 0.8, 1.5, 2.0, 3.0};
  const std::vector<double> egini{1.5, 2.0, 3.0};
  const std::vector<double> frac{0.6, 1.0, 2.0, 3.0};
  const std::vector<double> levels{0.2, 0.5, 0.9};

  for (const char* f : {"CT", "CRT", "WCT", "WCRT"}) {
    for (double a : tsallis) add(f, {{"alpha", a}});
  }
  for (const char* f : {"GiniSemidiff", "WGini", "Gini", "CRE", "CE", "WCRE", "WGCRE", "WCE", "WGCE"}) add(f, {});
  for (double r : egini) add("EGini", {{"r", r}});
  for (double a : frac) {
    add("FGRE", {{"alpha", a}});
    add("FGE", {{"alpha", a}});
  }
  for (double n : {1.0, 2.0, 3.0}) {
    add("GCRE", {{"n", n}});
    add("GCE", {{"n", n}});
  }
  for (double x : levels) {
    for (double a : tsallis) {
      add("TCRTE", {{"alpha", a}, {"p", x}});
      add("DCRT", {{"alpha", a}, {"Ft", x}});
      add("DCT", {{"alpha", a}, {"Ft", x}});
    }
    for (double r : egini) {
      add("TNEGini", {{"r", r}, {"p", x}});
      add("TEGini", {{"r", r}, {"p", x}});
    }
    add("TNGini", {{"p", x}});
    add("TGini", {{"p", x}});
    add("TCRE", {{"p", x}});
    add("DGini", {{"Ft", x}});
    add("DCE", {{"Ft", x}});
    for (const char* f : {"DWCRE", "DWGCRE", "DWCE", "DWGCE"}) add(f, {{"Ft", x}});
  }
  for (double p : {0.2, 0.5, 0.9, 0.99}) {
    add("ES", {{"p", p}});
    for (double t : {0.0, 0.25, 0.5}) add("GS", {{"p", p}, {"tau", t}});
    for (double t : {0.0, 0.5, 1.0}) {
      add("CRES", {{"p", p}, {"tau", t}});
      add("CRTES", {{"alpha", 2.0 / 3.0}, {"p", p}, {"tau", t}});
      add("CRTES", {{"alpha", 3.0}, {"p", p}, {"tau", t}});
    }
    for (double r : {1.5, 3.0}) {
      const double tmax = 1.0 / (2.0 * (r - 1.0) * std::pow(1.0 - p, r - 2.0));
      for (double t : {0.0, 0.5, 1.0, tmax}) {
        if (t <= tmax) add("EGS", {{"p", p}, {"r", r}, {"tau", t}});
      }
    }
  }
  return out;
}

}  // namespace riskbound::testing
