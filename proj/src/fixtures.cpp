#include "pmuplace/fixtures.hpp"

namespace pmuplace::fixtures {

const std::string& ieee9_grid_document() {
  static const std::string doc = R"({
  "name": "ieee9",
  "buses": [
    {"id": 1, "load": true},
    {"id": 2, "load": true},
    {"id": 3},
    {"id": 4, "load": true},
    {"id": 5, "load": true},
    {"id": 6, "load": true},
    {"id": 7, "load": true},
    {"id": 8, "load": true},
    {"id": 9}
  ],
  "branches": [
    {"from": 2, "to": 7, "g": 0.0, "b": -16.0},
    {"from": 7, "to": 8, "g": 1.6171224732, "b": -13.6979785969},
    {"from": 8, "to": 9, "g": 1.1550874809, "b": -9.7842704264},
    {"from": 9, "to": 3, "g": 0.0, "b": -17.0648464164},
    {"from": 9, "to": 6, "g": 1.2820091384, "b": -5.5882449624},
    {"from": 6, "to": 4, "g": 1.9421912487, "b": -10.5106820519},
    {"from": 4, "to": 1, "g": 0.0, "b": -17.3611111111},
    {"from": 4, "to": 5, "g": 1.3651877133, "b": -11.6040955631},
    {"from": 5, "to": 7, "g": 1.1876043793, "b": -5.9751345333}
  ]
}
)";
  return doc;
}

const std::string& ieee9_risk_csv() {
  static const std::string csv =
      "bus,1,2,3,4,5,6,7,8,9\n"
      "1,1,0.002,0.001,0.001,0.002,0.001,0.002,0.001,0.001\n"
      "2,0.002,1,0.001,0.002,0.002,0.001,0.001,0.002,0.002\n"
      "3,0.001,0.001,1,0.002,0.002,0.001,0.002,0.001,0.001\n"
      "4,0.001,0.002,0.002,1,0.002,0.001,0.002,0.001,0.002\n"
      "5,0.002,0.002,0.002,0.002,1,0.002,0.002,0.001,0.001\n"
      "6,0.001,0.001,0.002,0.001,0.002,1,0.001,0.002,0.002\n"
      "7,0.002,0.001,0.002,0.002,0.002,0.001,1,0.002,0.001\n"
      "8,0.001,0.002,0.001,0.001,0.001,0.002,0.002,1,0.002\n"
      "9,0.001,0.002,0.001,0.002,0.001,0.002,0.001,0.002,1\n";
  return csv;
}

const IntMatrix& ieee9_reference_incidence() {
  static const IntMatrix ref = [] {
    IntMatrix m(18, 9);
    m << 0, 1, 0, 0, 0, 0, -1, 0, 0,
         0, -1, 0, 0, 0, 0, 1, 0, 0,
         0, 0, 0, 0, 0, 0, 1, -1, 0,
         0, 0, 0, 0, 0, 0, -1, 1, 0,
         0, 0, 0, 0, 0, 0, 0, 1, -1,
         0, 0, 0, 0, 0, 0, 0, -1, 1,
         0, 0, -1, 0, 0, 0, 0, 0, 1,
         0, 0, 1, 0, 0, 0, 0, 0, -1,
         0, 0, 0, 0, 0, -1, 0, 0, 1,
         0, 0, 0, 0, 0, 1, 0, 0, -1,
         0, 0, 0, -1, 0, 1, 0, 0, 0,
         0, 0, 0, 1, 0, -1, 0, 0, 0,
         -1, 0, 0, 1, 0, 0, 0, 0, 0,
         1, 0, 0, -1, 0, 0, 0, 0, 0,
         0, 0, 0, 1, -1, 0, 0, 0, 0,
         0, 0, 0, -1, 1, 0, 0, 0, 0,
         0, 0, 0, 0, 1, 0, -1, 0, 0,
         0, 0, 0, 0, -1, 0, 1, 0, 0;
    return m;
  }();
  return ref;
}

}  // namespace pmuplace::fixtures
