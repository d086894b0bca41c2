#include "zerolab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "zerolab/error.hpp"

namespace zlab::io {

namespace {

std::ofstream open(const fs::path& path, bool binary = false) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw Error("io", "cannot open " + path.string() + " for writing");
  return os;
}

constexpr char kMagic[8] = {'Z', 'L', 'A', 'B', 'S', 'N', 'P', '1'};

}  // namespace

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(const Trajectory& traj, const fs::path& path) {
  auto os = open(path);
  os << "t,x,u\n";
  for (const auto& s : traj.snapshots) {
    const auto x = s.nodes();
    const auto u = s.values();
    const std::string t = fmt(s.time());
    for (std::size_t j = 0; j < x.size(); ++j) os << t << ',' << fmt(x[j]) << ',' << fmt(u[j]) << '\n';
  }
}

void write_snapshot_dump(const Trajectory& traj, const fs::path& path) {
  auto os = open(path, true);
  const std::uint64_t m = traj.snapshots.empty() ? 0 : traj.snapshots.front().size();
  const std::uint64_t count = traj.snapshots.size();
  for (const auto& s : traj.snapshots)
    if (s.size() != m) throw Error("io", "snapshot dump needs a constant node count");
  os.write(kMagic, sizeof kMagic);
  os.write(reinterpret_cast<const char*>(&m), sizeof m);
  os.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (const auto& s : traj.snapshots) {
    const double t = s.time();
    os.write(reinterpret_cast<const char*>(&t), sizeof t);
    os.write(reinterpret_cast<const char*>(s.nodes().data()), std::streamsize(m * sizeof(double)));
    os.write(reinterpret_cast<const char*>(s.values().data()), std::streamsize(m * sizeof(double)));
  }
}

std::vector<Snapshot> read_snapshot_dump(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("io", "cannot open " + path.string());
  char magic[8];
  std::uint64_t m = 0, count = 0;
  is.read(magic, sizeof magic);
  is.read(reinterpret_cast<char*>(&m), sizeof m);
  is.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw Error("io", "not a snapshot dump: " + path.string());
  std::vector<Snapshot> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    double t;
    std::vector<double> x(m), u(m);
    is.read(reinterpret_cast<char*>(&t), sizeof t);
    is.read(reinterpret_cast<char*>(x.data()), std::streamsize(m * sizeof(double)));
    is.read(reinterpret_cast<char*>(u.data()), std::streamsize(m * sizeof(double)));
    if (!is) throw Error("io", "truncated snapshot dump: " + path.string());
    out.emplace_back(t, std::move(x), std::move(u));
  }
  return out;
}

void write_front_csv(const Trajectory& traj, const fs::path& path) {
  auto os = open(path);
  os << "t,g,h,Q\n";
  for (std::size_t k = 0; k < traj.fronts.g.size(); ++k)
    os << fmt(traj.snapshots[k].time()) << ',' << fmt(traj.fronts.g[k]) << ',' << fmt(traj.fronts.h[k]) << ','
       << fmt(traj.fronts.q[k]) << '\n';
}

void write_zero_count_csv(const ZeroTrace& zt, const fs::path& path) {
  auto os = open(path);
  os << "t,Z\n";
  for (const auto& inv : zt.inventories) os << fmt(inv.t) << ',' << inv.count() << '\n';
}

void write_trace_csv(const Trajectory& traj, const ZeroTrace& zt, const fs::path& path) {
  auto os = open(path);
  const bool fronts = !traj.fronts.empty();
  os << "t,Z,w1,w2" << (fronts ? ",g,h,Q" : "") << '\n';
  std::map<double, int> counts;
  for (const auto& inv : zt.inventories) counts[inv.t] = inv.count();
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& s = traj.snapshots[k];
    os << fmt(s.time()) << ',';
    if (auto it = counts.find(s.time()); it != counts.end()) os << it->second;
    os << ',' << fmt(s.values().front()) << ',' << fmt(s.values().back());
    if (fronts) os << ',' << fmt(traj.fronts.g[k]) << ',' << fmt(traj.fronts.h[k]) << ',' << fmt(traj.fronts.q[k]);
    os << '\n';
  }
}

std::vector<std::string> event_lines(const ZeroTrace& zt, const std::vector<MomentClassification>& moments) {
  std::vector<std::pair<double, std::string>> ev;
  auto add = [&](double t, const std::string& type, json payload) {
    json j;
    j["t"] = t;
    j["type"] = type;
    j["payload"] = std::move(payload);
    ev.emplace_back(t, j.dump());
  };
  for (const auto& d : zt.drops) {
    json p = {{"t_before", d.t_before}, {"t_after", d.t_after}, {"z_before", d.z_before},
              {"z_after", d.z_after},   {"witness", to_string(d.witness)}, {"locations", d.locations}};
    add(d.t_after, "drop", p);
    if (d.witness == WitnessKind::Merge) {
      double mid = 0;
      for (double x : d.locations) mid += x;
      if (!d.locations.empty()) mid /= double(d.locations.size());
      add(d.t_after, "merge", {{"x", mid}, {"bracket", {d.t_before, d.t_after}}});
    } else if (d.witness == WitnessKind::BoundaryExit) {
      add(d.t_after, "boundary-exit", {{"x", d.locations.empty() ? 0.0 : d.locations.front()},
                                       {"bracket", {d.t_before, d.t_after}}});
    }
  }
  for (const auto& mc : moments)
    for (const auto& r : mc.runs)
      add(r.t_start, "moment-label",
          {{"side", mc.side}, {"t_end", r.t_end}, {"samples", r.samples()}, {"labels", r.labels()}});
  std::stable_sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (auto& e : ev) out.push_back(std::move(e.second));
  return out;
}

void write_event_log(const ZeroTrace& zt, const std::vector<MomentClassification>& moments, const fs::path& path) {
  auto os = open(path);
  for (const auto& l : event_lines(zt, moments)) os << l << '\n';
}

void write_report(const std::vector<harness::CheckReport>& reports, const fs::path& path) {
  auto os = open(path);
  bool ok = true;
  for (const auto& r : reports) {
    os << r.to_text() << '\n';
    ok = ok && r.passed();
  }
  os << "overall: " << (ok ? "PASS" : "FAIL") << '\n';
}

// ---------------------------------------------------------------------------
// SVG

namespace {

struct Frame {
  double x0, x1, y0, y1;
  static constexpr double W = 640, H = 400, pad = 50;
  double px(double x) const { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); }
  double py(double y) const { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); }
};

Frame frame_for(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  return {x0, x1, y0, y1};
}

void header(std::ostream& os, const Frame& f, const std::string& title, const std::string& xl, const std::string& yl) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::W << "\" height=\"" << Frame::H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << Frame::W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
  os << "<rect x=\"" << Frame::pad << "\" y=\"" << Frame::pad << "\" width=\"" << Frame::W - 2 * Frame::pad
     << "\" height=\"" << Frame::H - 2 * Frame::pad << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << Frame::W / 2 << "\" y=\"" << Frame::H - 12 << "\" text-anchor=\"middle\">" << xl
     << "</text>\n";
  os << "<text x=\"14\" y=\"" << Frame::H / 2 << "\" transform=\"rotate(-90 14 " << Frame::H / 2
     << ")\" text-anchor=\"middle\">" << yl << "</text>\n";
  auto tick = [&](double v, bool xaxis) {
    if (xaxis)
      os << "<text x=\"" << f.px(v) << "\" y=\"" << Frame::H - Frame::pad + 15 << "\" text-anchor=\"middle\">"
         << fmt(std::round(v * 1e4) / 1e4) << "</text>\n";
    else
      os << "<text x=\"" << Frame::pad - 5 << "\" y=\"" << f.py(v) + 4 << "\" text-anchor=\"end\">"
         << fmt(std::round(v * 1e4) / 1e4) << "</text>\n";
  };
  tick(f.x0, true);
  tick(f.x1, true);
  tick(f.y0, false);
  tick(f.y1, false);
}

void polyline(std::ostream& os, const Frame& f, const std::vector<double>& x, const std::vector<double>& y,
              const std::string& color) {
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < x.size(); ++k) os << f.px(x[k]) << ',' << f.py(y[k]) << ' ';
  os << "\"/>\n";
}

}  // namespace

void plot_zero_count(const ZeroTrace& zt, const fs::path& path) {
  auto os = open(path);
  const auto t = zt.times();
  const auto z = zt.counts();
  const int zmax = z.empty() ? 1 : *std::max_element(z.begin(), z.end());
  const Frame f = frame_for(t.empty() ? 0 : t.front(), t.empty() ? 1 : t.back(), 0, zmax + 1);
  header(os, f, "Z(t)", "t", "Z");
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) {
      xs.push_back(t[k]);
      ys.push_back(z[k - 1]);
    }
    xs.push_back(t[k]);
    ys.push_back(z[k]);
  }
  polyline(os, f, xs, ys, "#1f77b4");
  os << "</svg>\n";
}

void plot_zero_curves(const ZeroTrace& zt, const fs::path& path) {
  auto os = open(path);
  double x0 = 0, x1 = 1;
  if (!zt.inventories.empty()) {
    x0 = zt.inventories.front().left;
    x1 = zt.inventories.front().right;
    for (const auto& inv : zt.inventories) {
      x0 = std::min(x0, inv.left);
      x1 = std::max(x1, inv.right);
    }
  }
  const auto t = zt.times();
  const Frame f = frame_for(x0, x1, t.empty() ? 0 : t.front(), t.empty() ? 1 : t.back());
  header(os, f, "zero curves", "x", "t");
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  for (const auto& c : zt.curves) polyline(os, f, c.x, c.t, colors[static_cast<std::size_t>(c.id) % 6]);
  for (const auto& d : zt.drops)
    for (double x : d.locations)
      os << "<circle cx=\"" << f.px(x) << "\" cy=\"" << f.py(d.t_after) << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
  os << "</svg>\n";
}

void plot_fronts(const Trajectory& traj, const fs::path& path) {
  auto os = open(path);
  std::vector<double> t;
  for (const auto& s : traj.snapshots) t.push_back(s.time());
  const auto& g = traj.fronts.g;
  const auto& h = traj.fronts.h;
  const double lo = g.empty() ? 0 : *std::min_element(g.begin(), g.end());
  const double hi = h.empty() ? 1 : *std::max_element(h.begin(), h.end());
  const Frame f = frame_for(lo, hi, t.empty() ? 0 : t.front(), t.empty() ? 1 : t.back());
  header(os, f, "fronts g(t), h(t)", "x", "t");
  polyline(os, f, g, t, "#1f77b4");
  polyline(os, f, h, t, "#d62728");
  os << "</svg>\n";
}

}  // namespace zlab::io
