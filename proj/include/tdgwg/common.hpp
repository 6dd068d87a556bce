#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace tdgwg {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr cplx I{0.0, 1.0};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Complex 2-vector; used for plane-wave exponents c in exp(c . x).
struct CVec2 {
  cplx x{};
  cplx y{};

  friend CVec2 operator+(const CVec2& a, const CVec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend CVec2 operator-(const CVec2& a, const CVec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend CVec2 operator*(cplx s, const CVec2& a) { return {s * a.x, s * a.y}; }
};

/// Bilinear (non-conjugating) product c . p for a real point p.
inline cplx dot(const CVec2& c, Vec2 p) { return c.x * p.x + c.y * p.y; }
inline cplx dot(const CVec2& c, const CVec2& p) { return c.x * p.x + c.y * p.y; }
inline double norm(const CVec2& c) { return std::sqrt(std::norm(c.x) + std::norm(c.y)); }

/// Base of every error raised by the library. The kind string is stable and
/// is what the CLI reports in the CSV status column.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define TDGWG_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  }

TDGWG_DEFINE_ERROR(InvalidArgument);
TDGWG_DEFINE_ERROR(CutoffWavenumber);
TDGWG_DEFINE_ERROR(SourceInsideDomain);
TDGWG_DEFINE_ERROR(DegenerateRequest);
TDGWG_DEFINE_ERROR(BoxTouchesBoundary);
TDGWG_DEFINE_ERROR(MeshError);
TDGWG_DEFINE_ERROR(TooFewDirections);
TDGWG_DEFINE_ERROR(FacetNotOnTruncation);
TDGWG_DEFINE_ERROR(NegativeGamma);
TDGWG_DEFINE_ERROR(EmptyMesh);
TDGWG_DEFINE_ERROR(ModeCountTooSmall);
TDGWG_DEFINE_ERROR(DimensionMismatch);
TDGWG_DEFINE_ERROR(SingularSystem);
TDGWG_DEFINE_ERROR(PointOutsideMesh);
TDGWG_DEFINE_ERROR(ZeroReference);
TDGWG_DEFINE_ERROR(InsufficientData);
TDGWG_DEFINE_ERROR(ConfigError);

#undef TDGWG_DEFINE_ERROR

}  // namespace tdgwg
