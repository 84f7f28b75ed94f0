#pragma once

namespace ipsep::windows {

enum class Orientation { h, v };

// Degree-7 ramp: 0 for t <= 0, 1 for t >= 1, nu(t) + nu(1 - t) = 1.
double meyer_aux(double t);

// 1 on [-1/16, 1/16], 0 outside [-1/8, 1/8].
double phi_hat(double u);
double Phi_hat(double xi1, double xi2);

// W(xi) = sqrt(Phi^2(xi / 4) - Phi^2(xi)) and W_j(xi) = W(2^{-2j} xi).
double corona_W(double xi1, double xi2);
double corona_W_j(double xi1, double xi2, int j);

// v(u) = cos(pi/2 nu(|u|)); sum_l v(u - l)^2 = 1.
double cone_bump(double u);
double cone_V(double xi1, double xi2, Orientation o);

// g_hat(xi) = b(xi1) b(xi2) with b = cone_bump; scaled g_hat_s(xi) = g_hat(xi / s) / s.
double gabor_window_hat(double xi1, double xi2);
double gabor_window_hat_s(double xi1, double xi2, double s);

}  // namespace ipsep::windows
