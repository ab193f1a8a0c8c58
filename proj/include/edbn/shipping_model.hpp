#ifndef EDBN_SHIPPING_MODEL_HPP
#define EDBN_SHIPPING_MODEL_HPP

#include <sstream>
#include <string_view>

#include "edbn/synth.hpp"

namespace edbn {

/// Shipping-goods process with 13 attributes: an insurance-dependent branch,
/// five functional derivations and two activity-conditioned attributes.
/// Same content as data/shipping_model.json.
inline constexpr std::string_view kShippingModelJson = R"json({
 "name": "shipping",
 "activities": [
  "Receive Order",
  "Check Stock",
  "Order Stock",
  "Assess Goods Value",
  "Request Insurance",
  "Approve Insurance",
  "Pack Goods",
  "Print Label",
  "Ship Goods",
  "Send Invoice",
  "Send Reminder",
  "Receive Payment",
  "Archive Order"
 ],
 "start": "Receive Order",
 "end": "Archive Order",
 "max_events": 64,
 "transitions": [
  {
   "from": "Receive Order",
   "to": "Check Stock",
   "weight": 1.0
  },
  {
   "from": "Check Stock",
   "to": "Order Stock",
   "weight": 0.25
  },
  {
   "from": "Check Stock",
   "to": "Assess Goods Value",
   "weight": 0.75
  },
  {
   "from": "Order Stock",
   "to": "Assess Goods Value",
   "weight": 1.0
  },
  {
   "from": "Assess Goods Value",
   "to": "Request Insurance",
   "weight": 1.0,
   "when": {
    "Insurance": "yes"
   }
  },
  {
   "from": "Assess Goods Value",
   "to": "Pack Goods",
   "weight": 1.0,
   "when": {
    "Insurance": "no"
   }
  },
  {
   "from": "Request Insurance",
   "to": "Approve Insurance",
   "weight": 1.0
  },
  {
   "from": "Approve Insurance",
   "to": "Pack Goods",
   "weight": 1.0
  },
  {
   "from": "Pack Goods",
   "to": "Print Label",
   "weight": 1.0
  },
  {
   "from": "Print Label",
   "to": "Ship Goods",
   "weight": 1.0
  },
  {
   "from": "Ship Goods",
   "to": "Send Invoice",
   "weight": 1.0
  },
  {
   "from": "Send Invoice",
   "to": "Receive Payment",
   "weight": 0.8
  },
  {
   "from": "Send Invoice",
   "to": "Send Reminder",
   "weight": 0.2
  },
  {
   "from": "Send Reminder",
   "to": "Receive Payment",
   "weight": 1.0
  },
  {
   "from": "Receive Payment",
   "to": "Archive Order",
   "weight": 1.0
  }
 ],
 "attributes": [
  {
   "name": "Department",
   "rule": "derived",
   "from": "Activity",
   "mapping": {
    "Receive Order": "Sales",
    "Check Stock": "Warehouse",
    "Order Stock": "Purchasing",
    "Assess Goods Value": "Sales",
    "Request Insurance": "Finance",
    "Approve Insurance": "Finance",
    "Pack Goods": "Warehouse",
    "Print Label": "Warehouse",
    "Ship Goods": "Logistics",
    "Send Invoice": "Finance",
    "Send Reminder": "Finance",
    "Receive Payment": "Finance",
    "Archive Order": "Sales"
   }
  },
  {
   "name": "Employee",
   "rule": "by_activity",
   "pools": {
    "Receive Order": [
     "anna",
     "bruno"
    ],
    "Check Stock": [
     "chen",
     "dmitri"
    ],
    "Order Stock": [
     "elena"
    ],
    "Assess Goods Value": [
     "anna",
     "bruno"
    ],
    "Request Insurance": [
     "farah",
     "gustav"
    ],
    "Approve Insurance": [
     "hana"
    ],
    "Pack Goods": [
     "chen",
     "dmitri",
     "ivan"
    ],
    "Print Label": [
     "chen",
     "dmitri",
     "ivan"
    ],
    "Ship Goods": [
     "jonas",
     "kira"
    ],
    "Send Invoice": [
     "farah",
     "gustav"
    ],
    "Send Reminder": [
     "farah",
     "gustav"
    ],
    "Receive Payment": [
     "farah",
     "gustav"
    ],
    "Archive Order": [
     "anna",
     "bruno"
    ]
   }
  },
  {
   "name": "Role",
   "rule": "derived",
   "from": "Employee",
   "mapping": {
    "anna": "clerk",
    "bruno": "clerk",
    "chen": "warehouse-worker",
    "dmitri": "warehouse-worker",
    "ivan": "warehouse-worker",
    "elena": "buyer",
    "farah": "accountant",
    "gustav": "accountant",
    "hana": "finance-manager",
    "jonas": "driver",
    "kira": "driver"
   }
  },
  {
   "name": "Insurance",
   "scope": "trace",
   "rule": "uniform",
   "values": [
    "yes",
    "no"
   ]
  },
  {
   "name": "GoodsValue",
   "scope": "trace",
   "rule": "uniform",
   "values": [
    "low",
    "medium",
    "high"
   ]
  },
  {
   "name": "Priority",
   "scope": "trace",
   "rule": "derived",
   "from": "GoodsValue",
   "mapping": {
    "low": "standard",
    "medium": "standard",
    "high": "express"
   }
  },
  {
   "name": "Customer",
   "scope": "trace",
   "rule": "uniform",
   "values": [
    "C01",
    "C02",
    "C03",
    "C04",
    "C05",
    "C06",
    "C07",
    "C08",
    "C09",
    "C10",
    "C11",
    "C12",
    "C13",
    "C14",
    "C15",
    "C16",
    "C17",
    "C18",
    "C19",
    "C20"
   ]
  },
  {
   "name": "Country",
   "scope": "trace",
   "rule": "derived",
   "from": "Customer",
   "mapping": {
    "C01": "BE",
    "C02": "NL",
    "C03": "DE",
    "C04": "FR",
    "C05": "BE",
    "C06": "NL",
    "C07": "DE",
    "C08": "FR",
    "C09": "BE",
    "C10": "NL",
    "C11": "DE",
    "C12": "FR",
    "C13": "BE",
    "C14": "NL",
    "C15": "DE",
    "C16": "FR",
    "C17": "BE",
    "C18": "NL",
    "C19": "DE",
    "C20": "FR"
   }
  },
  {
   "name": "Carrier",
   "scope": "trace",
   "rule": "uniform",
   "values": [
    "DHL",
    "UPS",
    "PostNL"
   ]
  },
  {
   "name": "Warehouse",
   "scope": "trace",
   "rule": "uniform",
   "values": [
    "WH-North",
    "WH-South",
    "WH-East"
   ]
  },
  {
   "name": "Region",
   "scope": "trace",
   "rule": "derived",
   "from": "Warehouse",
   "mapping": {
    "WH-North": "north",
    "WH-South": "south",
    "WH-East": "east"
   }
  },
  {
   "name": "Document",
   "rule": "by_activity",
   "pools": {
    "Receive Order": [
     "order-form",
     "web-order"
    ],
    "Check Stock": [
     "stock-report"
    ],
    "Order Stock": [
     "purchase-order"
    ],
    "Assess Goods Value": [
     "valuation"
    ],
    "Request Insurance": [
     "insurance-request"
    ],
    "Approve Insurance": [
     "insurance-policy"
    ],
    "Pack Goods": [
     "packing-list"
    ],
    "Print Label": [
     "shipping-label"
    ],
    "Ship Goods": [
     "waybill"
    ],
    "Send Invoice": [
     "invoice"
    ],
    "Send Reminder": [
     "reminder"
    ],
    "Receive Payment": [
     "receipt",
     "bank-statement"
    ],
    "Archive Order": [
     "archive-record"
    ]
   }
  }
 ]
}
)json";

inline ProcessModel default_shipping_model() {
    std::istringstream in{std::string(kShippingModelJson)};
    return parse_process_model(in);
}

}  // namespace edbn

#endif
