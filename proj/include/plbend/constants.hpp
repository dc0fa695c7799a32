#ifndef PLBEND_CONSTANTS_HPP
#define PLBEND_CONSTANTS_HPP

namespace plbend {

inline constexpr double pi = 3.14159265358979323846;

// CODATA SI values.
struct PhysicalConstants {
    static constexpr double vacuum_permittivity = 8.8541878128e-12;  // eps0 (F/m)
    static constexpr double vacuum_permeability = 1.25663706212e-6;  // mu0 (H/m)
    static constexpr double speed_of_light = 2.99792458e8;           // c (m/s)
};

// Internal unit convention: lengths in meters, wavenumbers in 1/m,
// frequencies in rad/s.  Only the reporting layer speaks um and 1/cm.
inline constexpr double meters_per_um = 1e-6;
inline constexpr double meters_per_nm = 1e-9;
inline constexpr double meters_per_cm = 1e-2;

inline constexpr double um_from_m(double m) { return m / meters_per_um; }
inline constexpr double m_from_um(double um) { return um * meters_per_um; }
inline constexpr double m_from_nm(double nm) { return nm * meters_per_nm; }
inline constexpr double m_from_cm(double cm) { return cm * meters_per_cm; }
inline constexpr double cm_from_m(double m) { return m / meters_per_cm; }

// 1/m <-> 1/cm
inline constexpr double per_cm_from_per_m(double v) { return v * meters_per_cm; }
inline constexpr double per_m_from_per_cm(double v) { return v / meters_per_cm; }

} // namespace plbend

#endif
