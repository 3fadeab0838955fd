#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cornerforge/baselines.hpp"
#include "cornerforge/detector.hpp"
#include "cornerforge/detectors.hpp"
#include "cornerforge/emit.hpp"
#include "cornerforge/error.hpp"
#include "cornerforge/faster.hpp"
#include "cornerforge/id3.hpp"
#include "cornerforge/pgm.hpp"
#include "cornerforge/repeatability.hpp"
#include "cornerforge/segment_test.hpp"
#include "cornerforge/synthetic.hpp"

namespace py = pybind11;
using namespace cornerforge;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const U8Array& a) {
  if (a.ndim() != 2) throw PreconditionError("expected a 2-D uint8 array");
  const auto h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
  return GrayImage(w, h, std::vector<std::uint8_t>(a.data(), a.data() + a.size()));
}

U8Array to_array(const GrayImage& img) {
  U8Array out({img.height(), img.width()});
  std::copy(img.data(), img.data() + img.pixels().size(), out.mutable_data());
  return out;
}

py::array_t<double> field_array(const ScalarField& f) {
  py::array_t<double> out({f.height, f.width});
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

py::array_t<int> points_array(const std::vector<Point>& pts) {
  py::array_t<int> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto m = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m(i, 0) = pts[i].x;
    m(i, 1) = pts[i].y;
  }
  return out;
}

py::array_t<double> keypoints_array(const std::vector<Keypoint>& kps) {
  py::array_t<double> out({static_cast<py::ssize_t>(kps.size()), py::ssize_t{3}});
  auto m = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < kps.size(); ++i) {
    m(i, 0) = kps[i].x;
    m(i, 1) = kps[i].y;
    m(i, 2) = kps[i].score;
  }
  return out;
}

std::vector<Keypoint> keypoints_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(1) < 2) throw PreconditionError("expected an (N, 2) or (N, 3) array");
  auto r = a.unchecked<2>();
  std::vector<Keypoint> out;
  for (py::ssize_t i = 0; i < r.shape(0); ++i)
    out.push_back({static_cast<int>(r(i, 0)), static_cast<int>(r(i, 1)), r.shape(1) > 2 ? r(i, 2) : 1.0});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "FAST and FAST-ER corner detection";

  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NotACornerError>(m, "NotACornerError", PyExc_ValueError);

  py::class_<TernaryTree>(m, "Tree")
      .def_static("learn", [](int n) { return learn_segment_test_tree(n); }, py::arg("n") = 9,
                  "Learn the exact FAST-n tree from every ring configuration.")
      .def_static("loads", &deserialize_tree)
      .def("dumps", &serialize_tree)
      .def_property_readonly("size", &TernaryTree::size)
      .def_property_readonly("depth", &TernaryTree::depth)
      .def("emit_source", [](const TernaryTree& t, const std::string& name) {
        EmitOptions o;
        o.function_name = name;
        return emit_source(t, o);
      }, py::arg("name") = "fast_tree_corner")
      .def("__eq__", [](const TernaryTree& a, const TernaryTree& b) { return a == b; });

  m.def("segment_test", [](const U8Array& img, int n, int t) { return points_array(detect_fast_n(to_image(img), n, t)); },
        py::arg("image"), py::arg("n") = 9, py::arg("threshold") = 20,
        "Corners by the direct segment test, as an (N, 2) array of x, y.");
  m.def("detect", [](const U8Array& img, const TernaryTree& tree, int t) {
    return points_array(detect(tree, to_image(img), t));
  }, py::arg("image"), py::arg("tree"), py::arg("threshold") = 20);
  m.def("detect_keypoints", [](const U8Array& img, const TernaryTree& tree, int t) {
    return keypoints_array(detect_keypoints(tree, to_image(img), t));
  }, py::arg("image"), py::arg("tree"), py::arg("threshold") = 20,
        "Scored and suppressed corners as an (N, 3) array of x, y, score.");
  m.def("corner_score", [](const U8Array& img, const TernaryTree& tree, int x, int y) {
    return corner_score_bisect(tree, to_image(img), {x, y});
  }, py::arg("image"), py::arg("tree"), py::arg("x"), py::arg("y"));

  m.def("run_detector", [](const U8Array& img, const std::string& algo, std::size_t count, int n, int threshold,
                           std::optional<TernaryTree> tree, double sigma, std::uint64_t seed) {
    DetectorConfig c;
    c.algo = algo;
    c.n = n;
    c.threshold = threshold;
    c.tree = std::move(tree);
    c.sigma = sigma;
    c.seed = seed;
    const auto det = make_detector(c);
    const GrayImage g = to_image(img);
    return keypoints_array(count ? det->detect(g, count, 0) : det->candidates(g, 0));
  }, py::arg("image"), py::arg("algo") = "fast-tree", py::arg("count") = 0, py::arg("n") = 9,
        py::arg("threshold") = 1, py::arg("tree") = py::none(), py::arg("sigma") = kDefaultBlurSigma,
        py::arg("seed") = 1);

  m.def("harris_response", [](const U8Array& img, double sigma) {
    return field_array(harris_response(structure_tensor(to_image(img), sigma)));
  }, py::arg("image"), py::arg("sigma") = kDefaultBlurSigma);
  m.def("shi_tomasi_response", [](const U8Array& img, double sigma) {
    return field_array(shi_tomasi_response(structure_tensor(to_image(img), sigma)));
  }, py::arg("image"), py::arg("sigma") = kDefaultBlurSigma);

  m.def("pair_repeatability", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& det_i,
                                 const py::array_t<double, py::array::c_style | py::array::forcecast>& det_j,
                                 const py::array_t<double, py::array::c_style | py::array::forcecast>& h,
                                 int width, int height, double epsilon) {
    if (h.ndim() != 2 || h.shape(0) != 3 || h.shape(1) != 3) throw PreconditionError("homography must be 3x3");
    Eigen::Matrix3d mat;
    auto r = h.unchecked<2>();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mat(i, j) = r(i, j);
    const auto s = pair_repeatability(keypoints_from(det_i), keypoints_from(det_j), Homography(mat), width, height,
                                      epsilon);
    return py::make_tuple(s.useful, s.repeated);
  }, py::arg("det_i"), py::arg("det_j"), py::arg("homography"), py::arg("width"), py::arg("height"),
        py::arg("epsilon") = kDefaultEpsilon, "(useful, repeated) for one ordered frame pair.");

  m.def("faster_cost", [](double r, std::vector<double> corners, std::size_t size, double wr, double wn, double ws) {
    return faster_cost(r, corners, size, {wr, wn, ws});
  }, py::arg("repeatability"), py::arg("corners_per_frame"), py::arg("tree_size"), py::arg("wr") = 1.0,
        py::arg("wn") = 3500.0, py::arg("ws") = 10000.0);
  m.def("anneal_temperature", &anneal_temperature, py::arg("iteration"), py::arg("max_iterations"),
        py::arg("alpha") = 30.0, py::arg("beta") = 100.0);

  m.def("synthetic_scene", [](int w, int h, std::uint64_t seed) { return to_array(make_synthetic_scene(w, h, seed)); },
        py::arg("width"), py::arg("height"), py::arg("seed") = 1);
  m.def("test_square", [](int size, int square, std::uint8_t fg, std::uint8_t bg) {
    return to_array(make_test_square(size, square, fg, bg));
  }, py::arg("size") = 64, py::arg("square") = 30, py::arg("fg") = 255, py::arg("bg") = 0);
  m.def("read_pgm", [](const std::string& path) { return to_array(read_pgm_file(path)); });
  m.def("write_pgm", [](const std::string& path, const U8Array& img) { write_pgm_file(path, to_image(img)); });
}
