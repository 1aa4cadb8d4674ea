#include "blowup/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

void put(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

}  // namespace

std::string csv_radial(const RadialSolution& sol) {
  std::string out = "r,W,U,v,V,S\n";
  for (std::size_t i = 0; i < sol.samples.size(); ++i) {
    const RadialState& s = sol.samples[i];
    put(out, s.r); out += ',';
    put(out, s.W); out += ',';
    put(out, sol.U(i)); out += ',';
    put(out, s.v); out += ',';
    put(out, sol.V(i)); out += ',';
    put(out, s.S); out += '\n';
  }
  return out;
}

std::string csv_profile(const ProfileABC& profile) {
  std::string out = "r,a,b,c\n";
  for (const AbcSample& s : profile.samples) {
    put(out, s.r); out += ',';
    put(out, s.a); out += ',';
    put(out, s.b); out += ',';
    put(out, s.c); out += '\n';
  }
  return out;
}

std::string csv_trajectory(const Trajectory& traj) {
  std::string out = "t,X,Y,Z\n";
  for (const FlowSample& s : traj.samples) {
    put(out, s.t); out += ',';
    put(out, s.s.X); out += ',';
    put(out, s.s.Y); out += ',';
    put(out, s.s.Z); out += '\n';
  }
  return out;
}

std::string csv_sweep(const std::vector<SweepRow>& rows) {
  std::string out = "v0,R,v0*R^beta0\n";
  for (const SweepRow& row : rows) {
    put(out, row.v0); out += ',';
    put(out, row.R); out += ',';
    put(out, row.invariant); out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::config_error, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(Errc::config_error, "short write to '" + path + "'");
}

std::string svg_profile_chart(const ProfileABC& profile,
                              const std::string& title) {
  const double W = 860, H = 520;
  const double ml = 70, mr = 160, mt = 50, mb = 55;  // margins
  const double pw = W - ml - mr, ph = H - mt - mb;
  const double r_lo = 0.9, r_hi = 1.0;

  // y-range from the plotted window, padded, always including 1.
  double y_lo = 1.0, y_hi = 1.0;
  for (const AbcSample& s : profile.samples) {
    if (s.r < r_lo) continue;
    for (double v : {s.a, s.b, s.c}) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  double pad = 0.08 * (y_hi - y_lo + 1e-12);
  y_lo -= pad;
  y_hi += pad;

  auto xm = [&](double r) { return ml + pw * (r - r_lo) / (r_hi - r_lo); };
  auto ym = [&](double y) { return mt + ph * (1 - (y - y_lo) / (y_hi - y_lo)); };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
     << H << "' viewBox='0 0 " << W << " " << H << "'>\n"
     << "<rect width='100%' height='100%' fill='white'/>\n"
     << "<text x='" << ml << "' y='28' font-family='sans-serif' "
        "font-size='15'>" << title << "</text>\n";

  // axes and ticks
  os << "<line x1='" << ml << "' y1='" << mt + ph << "' x2='" << ml + pw
     << "' y2='" << mt + ph << "' stroke='black'/>\n"
     << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
     << mt + ph << "' stroke='black'/>\n";
  for (int i = 0; i <= 5; ++i) {
    double r = r_lo + i * (r_hi - r_lo) / 5;
    os << "<line x1='" << xm(r) << "' y1='" << mt + ph << "' x2='" << xm(r)
       << "' y2='" << mt + ph + 5 << "' stroke='black'/>\n"
       << "<text x='" << xm(r) << "' y='" << mt + ph + 20
       << "' font-family='sans-serif' font-size='11' text-anchor='middle'>"
       << r << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    double y = y_lo + i * (y_hi - y_lo) / 4;
    os << "<line x1='" << ml - 5 << "' y1='" << ym(y) << "' x2='" << ml
       << "' y2='" << ym(y) << "' stroke='black'/>\n"
       << "<text x='" << ml - 9 << "' y='" << ym(y) + 4
       << "' font-family='sans-serif' font-size='11' text-anchor='end'>" << y
       << "</text>\n";
  }
  os << "<text x='" << ml + pw / 2 << "' y='" << H - 12
     << "' font-family='sans-serif' font-size='13' text-anchor='middle'>r"
     << "</text>\n";

  // unit reference
  os << "<line x1='" << ml << "' y1='" << ym(1.0) << "' x2='" << ml + pw
     << "' y2='" << ym(1.0)
     << "' stroke='#999' stroke-dasharray='5,4'/>\n";

  const char* colors[3] = {"#c0392b", "#2471a3", "#1e8449"};
  const char* names[3] = {"a", "b", "c"};
  for (int curve = 0; curve < 3; ++curve) {
    os << "<polyline fill='none' stroke='" << colors[curve]
       << "' stroke-width='1.6' points='";
    for (const AbcSample& s : profile.samples) {
      if (s.r < r_lo || s.r >= r_hi) continue;
      double val = curve == 0 ? s.a : curve == 1 ? s.b : s.c;
      double y = std::min(std::max(val, y_lo), y_hi);
      os << xm(s.r) << "," << ym(y) << " ";
    }
    os << "'/>\n";
    double lx = ml + pw + 16, lyy = mt + 24 + 24 * curve;
    os << "<line x1='" << lx << "' y1='" << lyy << "' x2='" << lx + 26
       << "' y2='" << lyy << "' stroke='" << colors[curve]
       << "' stroke-width='2'/>\n"
       << "<text x='" << lx + 33 << "' y='" << lyy + 4
       << "' font-family='sans-serif' font-size='13'>" << names[curve]
       << "(r)</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace blowup
