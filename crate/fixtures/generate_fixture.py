#!/usr/bin/env python3
"""Regenerates fixtures/onet_mini: a small O*NET-shaped release plus labor stats.

Ratings are a deterministic function of a few latent traits per occupation,
so the fixture has realistic structure (manual vs. analytic vs. social work).
"""
import math
import os
import random

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "onet_mini")
rng = random.Random(20211)

# soc, title, description, tasks, traits(manual, routine, analytic, social), wage, growth, education
OCCS = [
    ("11-1011.00", "Chief Executives",
     "Determine and formulate policies and provide overall direction of companies or private and public sector organizations within guidelines set up by a board of directors.",
     ["Direct or coordinate an organization's financial or budget activities to fund operations, maximize investments, or increase efficiency.",
      "Confer with board members, organization officials, or staff members to discuss issues, coordinate activities, or resolve problems.",
      "Negotiate or approve contracts or agreements with suppliers, distributors, federal or state agencies, or other organizational entities."],
     (0.1, 0.2, 0.8, 0.9), 184460, 4.4, "Bachelor's degree"),
    ("13-2011.00", "Accountants and Auditors",
     "Examine, analyze, and interpret accounting records to prepare financial statements, give advice, or audit and evaluate statements prepared by others.",
     ["Prepare detailed reports on audit findings.",
      "Examine and evaluate financial and information systems, recommending controls to ensure system reliability and data integrity.",
      "Analyze business operations, trends, costs, revenues, financial commitments, and obligations to project future revenues and expenses."],
     (0.05, 0.7, 0.8, 0.3), 73560, 4.4, "Bachelor's degree"),
    ("15-2051.00", "Data Scientists",
     "Develop and implement a set of techniques or analytics applications to transform raw data into meaningful information using data-oriented programming languages and visualization software.",
     ["Apply data mining, data modeling, natural language processing, and machine learning to extract and analyze information from large structured and unstructured datasets.",
      "Create graphs, charts, or other visualizations to convey the results of data analysis using specialized software.",
      "Test, validate, and reformulate models to ensure accurate prediction of outcomes of interest."],
     (0.0, 0.3, 1.0, 0.3), 98230, 31.4, "Bachelor's degree"),
    ("15-1252.00", "Software Developers",
     "Research, design, and develop computer and network software or specialized utility programs.",
     ["Analyze user needs and software requirements to determine feasibility of design within time and cost constraints.",
      "Modify existing software to correct errors, adapt it to new hardware, or upgrade interfaces and improve performance.",
      "Design, develop and modify software systems, using scientific analysis and mathematical models to predict and measure outcomes."],
     (0.05, 0.4, 0.95, 0.3), 110140, 22.2, "Bachelor's degree"),
    ("19-2011.00", "Astronomers",
     "Observe, research, and interpret astronomical phenomena to increase basic knowledge or apply such information to practical problems.",
     ["Calculate orbits and determine sizes, shapes, brightness, and motions of different celestial bodies.",
      "Measure radio, infrared, gamma, and x-ray emissions from extraterrestrial sources.",
      "Present research findings at scientific conferences and in papers written for scientific journals."],
     (0.1, 0.2, 1.0, 0.3), 114590, 5.2, "Doctoral or professional degree"),
    ("21-2011.00", "Clergy",
     "Conduct religious worship and perform other spiritual functions associated with beliefs and practices of religious faith or denomination.",
     ["Pray and promote spirituality.",
      "Lead congregations in worship services.",
      "Counsel individuals or groups concerning their spiritual, emotional, or personal needs."],
     (0.1, 0.2, 0.4, 1.0), 50400, 4.5, "Bachelor's degree"),
    ("23-1022.00", "Arbitrators, Mediators, and Conciliators",
     "Facilitate negotiation and conflict resolution through dialogue. Resolve conflicts outside of the court system by mutual consent of parties involved.",
     ["Conduct hearings to obtain information or evidence relative to disposition of claims.",
      "Analyze evidence and apply relevant laws, regulations, policies, and precedents to reach conclusions.",
      "Confer with disputants to clarify issues, identify underlying concerns, and develop an understanding of their respective needs and interests."],
     (0.0, 0.3, 0.8, 0.9), 66130, 8.4, "Bachelor's degree"),
    ("25-2052.00", "Special Education Teachers, Kindergarten and Elementary School",
     "Teach academic, social, and life skills to kindergarten and elementary school students with learning, emotional, or physical disabilities.",
     ["Develop individual educational plans designed to promote students' educational, physical, or social development.",
      "Establish and enforce rules for behavior and policies and procedures to maintain order among the students for whom they are responsible.",
      "Confer with parents, administrators, testing specialists, social workers, and professionals to develop individual educational plans."],
     (0.2, 0.3, 0.5, 1.0), 61030, 3.1, "Bachelor's degree"),
    ("27-2011.00", "Actors",
     "Play parts in stage, television, radio, video, or film productions, or other settings for entertainment, information, or instruction.",
     ["Study and rehearse roles from scripts to interpret, learn and memorize lines, stunts, and cues as directed.",
      "Work closely with directors, other actors, and playwrights to find the interpretation most suited to the role.",
      "Perform humor and drama, using speech, body movements, and facial expressions to entertain audiences."],
     (0.4, 0.2, 0.4, 0.9), None, 3.2, "Some college, no degree"),
    ("29-1223.00", "Psychiatrists",
     "Diagnose, treat, and help prevent disorders of the mind.",
     ["Analyze and evaluate patient data or test findings to diagnose nature or extent of mental disorder.",
      "Prescribe, direct, or administer psychotherapeutic treatments or medications to treat mental, emotional, or behavioral disorders.",
      "Counsel outpatients or other patients during office visits."],
     (0.1, 0.1, 0.9, 1.0), 217100, 12.5, "Doctoral or professional degree"),
    ("35-2014.00", "Cooks, Restaurant",
     "Prepare, season, and cook dishes such as soups, meats, vegetables, or desserts in restaurants.",
     ["Turn or stir foods to ensure even cooking.",
      "Season and cook food according to recipes or personal judgment and experience.",
      "Portion, arrange, and garnish food, and serve food to waiters or patrons."],
     (0.9, 0.8, 0.1, 0.3), 28800, 22.9, "No formal educational credential"),
    ("39-5092.00", "Manicurists and Pedicurists",
     "Clean and shape customers' fingernails and toenails.",
     ["Shape and smooth ends of nails, using scissors, files, or emery boards.",
      "Remove previously applied nail polish, using liquid remover and swabs.",
      "Clean and sterilize tools and equipment."],
     (0.9, 0.8, 0.1, 0.5), 27870, 19.0, "Postsecondary nondegree award"),
    ("43-3031.00", "Bookkeeping, Accounting, and Auditing Clerks",
     "Compute, classify, and record numerical data to keep financial records complete.",
     ["Operate computers programmed with accounting software to record, store, and analyze information.",
      "Check figures, postings, and documents for correct entry, mathematical accuracy, and proper codes.",
      "Classify, record, and summarize numerical and financial data to compile and keep financial records, using journals and ledgers or computers."],
     (0.2, 1.0, 0.4, 0.2), 42410, -5.6, "Some college, no degree"),
    ("43-4051.00", "Customer Service Representatives",
     "Interact with customers to provide basic or scripted information in response to routine inquiries about products and services.",
     ["Confer with customers by telephone or in person to provide information about products or services, take or enter orders, or obtain details of complaints.",
      "Keep records of customer interactions or transactions, recording details of inquiries, complaints, or comments, as well as actions taken.",
      "Check to ensure that appropriate changes were made to resolve customers' problems."],
     (0.1, 0.9, 0.3, 0.6), 35830, -1.9, "High school diploma or equivalent"),
    ("47-2022.00", "Stonemasons",
     "Build stone structures, such as piers, walls, and abutments. Lay walks, curbstones, or special types of masonry for vats, tanks, and floors.",
     ["Set stone or marble in place, according to layout or pattern.",
      "Lay out wall patterns or foundations, using straight edge, rule, or staked lines.",
      "Shape, trim, face and cut marble or stone preparatory to setting, using power saws, cutting equipment, and hand tools."],
     (1.0, 0.7, 0.1, 0.1), 44810, 3.0, "High school diploma or equivalent"),
    ("47-5043.00", "Roof Bolters, Mining",
     "Operate machinery to install roof support bolts in underground mine.",
     ["Drill bolt holes into roofs at specified distances from ribs or adjacent bolts.",
      "Position bolting machines, and insert drill bits into drill holders.",
      "Install dust collectors and hoses to control dust generated by drilling."],
     (1.0, 0.8, 0.1, 0.0), 61620, -8.6, "No formal educational credential"),
    ("51-9111.00", "Packaging and Filling Machine Operators and Tenders",
     "Operate or tend machines to prepare industrial or consumer products for storage or shipment.",
     ["Stop or reset machines when malfunctions occur, clear machine jams, and report malfunctions to a supervisor.",
      "Observe machine operations to ensure quality and conformity of filled or packaged products to standards.",
      "Tend or operate machines that package product."],
     (0.9, 1.0, 0.1, 0.1), 31970, -5.0, "High school diploma or equivalent"),
    ("53-3032.00", "Heavy and Tractor-Trailer Truck Drivers",
     "Drive a tractor-trailer combination or a truck with a capacity of at least 26,001 pounds Gross Vehicle Weight.",
     ["Drive trucks with capacities greater than 3 tons, including tractor-trailer combinations, to transport and deliver products, livestock, or other materials.",
      "Check vehicles to ensure that mechanical, safety, and emergency equipment is in good working order.",
      "Maintain logs of working hours or of vehicle service or repair status, following applicable state and federal regulations."],
     (0.8, 0.8, 0.1, 0.1), 45260, 1.1, "Postsecondary nondegree award"),
]
# Listed in Occupation Data but without any ratings; ingest drops it.
UNRATED = ("55-1011.00", "Air Crew Officers",
           "Perform and direct in-flight duties to ensure the successful completion of combat, reconnaissance, transport, and search and rescue missions.")

# element id, name, description, category file, trait loadings (manual, routine, analytic, social)
ELEMENTS = [
    ("1.A.1.a.1", "Oral Comprehension", "The ability to listen to and understand information and ideas presented through spoken words and sentences.", "Abilities", (0.0, 0.0, 0.5, 0.6)),
    ("1.A.1.b.5", "Deductive Reasoning", "The ability to apply general rules to specific problems to produce answers that make sense.", "Abilities", (0.0, 0.1, 0.9, 0.2)),
    ("1.A.4.a.6", "Depth Perception", "The ability to judge which of several objects is closer or farther away from you, or to judge the distance between you and an object.", "Abilities", (0.9, 0.2, 0.0, -0.2)),
    ("1.A.2.a.2", "Manual Dexterity", "The ability to quickly move your hand, your hand together with your arm, or your two hands to grasp, manipulate, or assemble objects.", "Abilities", (1.0, 0.3, -0.2, 0.0)),
    ("1.A.1.f.1", "Spatial Orientation", "The ability to know your location in relation to the environment or to know where other objects are in relation to you.", "Abilities", (0.8, 0.1, 0.1, -0.1)),
    ("2.A.1.a", "Reading Comprehension", "Understanding written sentences and paragraphs in work related documents.", "Skills", (-0.2, 0.2, 0.8, 0.3)),
    ("2.A.2.a", "Critical Thinking", "Using logic and reasoning to identify the strengths and weaknesses of alternative solutions, conclusions or approaches to problems.", "Skills", (-0.1, 0.0, 0.9, 0.4)),
    ("2.B.1.a", "Social Perceptiveness", "Being aware of others' reactions and understanding why they react as they do.", "Skills", (-0.2, 0.0, 0.2, 1.0)),
    ("2.C.1.b", "Clerical", "Knowledge of administrative and clerical procedures and systems such as word processing, managing files and records, stenography and transcription, designing forms, and workplace terminology.", "Knowledge", (-0.1, 0.9, 0.3, 0.2)),
    ("2.C.4.a", "Mathematics", "Knowledge of arithmetic, algebra, geometry, calculus, statistics, and their applications.", "Knowledge", (0.0, 0.3, 1.0, -0.1)),
    ("2.C.7.e", "Philosophy and Theology", "Knowledge of different philosophical systems and religions. This includes their basic principles, values, ethics, ways of thinking, customs, practices, and their impact on human culture.", "Knowledge", (-0.2, -0.2, 0.4, 0.8)),
    ("4.A.2.a.4", "Analyzing Data or Information", "Identifying the underlying principles, reasons, or facts of information by breaking down information or data into separate parts.", "Work Activities", (-0.2, 0.3, 1.0, 0.0)),
    ("4.A.2.b.2", "Thinking Creatively", "Developing, designing, or creating new applications, ideas, relationships, systems, or products, including artistic contributions.", "Work Activities", (0.0, -0.4, 0.7, 0.4)),
    ("4.A.4.a.1", "Interpreting the Meaning of Information for Others", "Translating or explaining what information means and how it can be used.", "Work Activities", (-0.2, 0.0, 0.7, 0.6)),
    ("4.A.4.a.4", "Establishing and Maintaining Interpersonal Relationships", "Developing constructive and cooperative working relationships with others, and maintaining them over time.", "Work Activities", (-0.1, 0.0, 0.2, 1.0)),
    ("4.A.4.b.4", "Guiding, Directing, and Motivating Subordinates", "Providing guidance and direction to subordinates, including setting performance standards and monitoring performance.", "Work Activities", (0.0, 0.0, 0.4, 0.8)),
    ("4.A.4.b.5", "Coaching and Developing Others", "Identifying the developmental needs of others and coaching, mentoring, or otherwise helping others to improve their knowledge or skills.", "Work Activities", (-0.1, -0.1, 0.3, 1.0)),
    ("4.A.3.a.4", "Operating Vehicles, Mechanized Devices, or Equipment", "Running, maneuvering, navigating, or driving vehicles or mechanized equipment, such as forklifts, passenger vehicles, aircraft, or watercraft.", "Work Activities", (1.0, 0.4, -0.2, -0.2)),
    ("4.A.3.a.3", "Controlling Machines and Processes", "Using either control mechanisms or direct physical activity to operate machines or processes (not including computers or vehicles).", "Work Activities", (0.9, 0.8, 0.0, -0.3)),
    ("1.C.5.a", "Dependability", "Job requires being reliable, responsible, and dependable, and fulfilling obligations.", "Work Styles", (0.2, 0.5, 0.3, 0.3)),
    ("1.C.4.b", "Stress Tolerance", "Job requires accepting criticism and dealing calmly and effectively with high stress situations.", "Work Styles", (0.1, 0.1, 0.3, 0.6)),
    ("1.B.2.a", "Achievement", "Occupations that satisfy this work value are results oriented and allow employees to use their strongest abilities, giving them a feeling of accomplishment.", "Work Values", (-0.1, -0.3, 0.8, 0.4)),
    ("1.B.2.d", "Relationships", "Occupations that satisfy this work value allow employees to provide service to others and work with co-workers in a friendly non-competitive environment.", "Work Values", (0.0, 0.0, 0.0, 1.0)),
    ("1.B.2.f", "Independence", "Occupations that satisfy this work value allow employees to work on their own and make decisions.", "Work Values", (0.1, -0.5, 0.6, 0.2)),
    ("1.B.1.a", "Realistic", "Realistic occupations frequently involve work activities that include practical, hands-on problems and solutions.", "Interests", (1.0, 0.3, -0.2, -0.3)),
    ("1.B.1.b", "Investigative", "Investigative occupations frequently involve working with ideas, and require an extensive amount of thinking.", "Interests", (-0.2, -0.1, 1.0, 0.0)),
    ("1.B.1.c", "Artistic", "Artistic occupations frequently involve working with forms, designs and patterns. They often require self-expression.", "Interests", (0.1, -0.5, 0.3, 0.5)),
    ("1.B.1.d", "Social", "Social occupations frequently involve working with, communicating with, and teaching people.", "Interests", (-0.2, -0.1, 0.1, 1.0)),
    ("1.B.1.e", "Enterprising", "Enterprising occupations frequently involve starting up and carrying out projects.", "Interests", (-0.1, -0.2, 0.4, 0.7)),
    ("1.B.1.f", "Conventional", "Conventional occupations frequently involve following set procedures and routines.", "Interests", (0.0, 1.0, 0.2, 0.0)),
    ("4.C.2.d.1.g", "Spend Time Using Your Hands to Handle, Control, or Feel Objects, Tools, or Controls", "How much does this job require using your hands to handle, control, or feel objects, tools or controls?", "Work Context", (1.0, 0.4, -0.3, -0.1)),
    ("4.C.2.d.1.i", "Spend Time Making Repetitive Motions", "How much does this job require making repetitive motions?", "Work Context", (0.7, 0.9, -0.3, -0.2)),
    ("4.C.3.b.7", "Importance of Repeating Same Tasks", "How important is repeating the same physical activities (e.g., key entry) or mental activities (e.g., checking entries in a ledger) over and over, without stopping, to performing this job?", "Work Context", (0.3, 1.0, -0.2, -0.1)),
    ("4.C.3.b.4", "Importance of Being Exact or Accurate", "How important is being very exact or highly accurate in performing this job?", "Work Context", (0.2, 0.7, 0.6, -0.1)),
    ("4.C.3.b.8", "Structured versus Unstructured Work", "To what extent is this job structured for the worker, rather than allowing the worker to determine tasks, priorities, and goals?", "Work Context", (0.1, -0.8, 0.4, 0.3)),
    ("4.C.3.d.3", "Pace Determined by Speed of Equipment", "How important is it to this job that the pace is determined by the speed of equipment or machinery? (This does not refer to keeping busy at all times on this job.)", "Work Context", (0.7, 0.9, -0.3, -0.3)),
]
# Present in the content model but never rated.
EXTRA_ELEMENT = ("1.A.3.a.1", "Static Strength", "The ability to exert maximum muscle force to lift, push, pull, or carry objects.")

SCALES = [
    ("IM", "Importance", 1, 5), ("LV", "Level", 0, 7), ("RT", "Relevance of Task", 0, 100),
    ("FT", "Frequency of Task (Categories 1-7)", 1, 7), ("OI", "Occupational Interests", 1, 7),
    ("EX", "Extent", 1, 7), ("CX", "Context", 1, 5), ("CXP", "Context (Categories 1-5)", 0, 100),
    ("CT", "Context", 1, 3), ("IH", "First Interest High-Point", 0, 6),
]


def level(traits, loadings):
    z = sum(t * l for t, l in zip(traits, loadings)) + rng.gauss(0, 0.15)
    return 1.0 / (1.0 + math.exp(-3.0 * (z - 0.35)))


def rescale(u, lo, hi):
    return round(lo + (hi - lo) * min(max(u, 0.0), 1.0), 2)


def write(name, header, rows):
    with open(os.path.join(OUT, name), "w", encoding="utf-8", newline="\n") as f:
        f.write("\t".join(header) + "\n")
        for r in rows:
            f.write("\t".join(str(x) for x in r) + "\n")


def main():
    os.makedirs(OUT, exist_ok=True)
    write("Occupation Data.txt", ["O*NET-SOC Code", "Title", "Description"],
          [(o[0], o[1], o[2]) for o in OCCS] + [UNRATED])
    write("Scales Reference.txt", ["Scale ID", "Scale Name", "Minimum", "Maximum"], SCALES)
    write("Content Model Reference.txt", ["Element ID", "Element Name", "Description"],
          [(e[0], e[1], e[2]) for e in ELEMENTS] + [EXTRA_ELEMENT])

    stmts, ratings = [], []
    task_id = 8000
    for soc, _, _, tasks, traits, *_ in OCCS:
        for k, text in enumerate(tasks):
            task_id += 1
            kind = "Core" if k < 2 else "Supplemental"
            stmts.append((soc, task_id, text, kind, 20, "07/2014", "Incumbent"))
            u = min(max(0.55 + 0.4 * (1 - k / 3) + rng.gauss(0, 0.05), 0), 1)
            ratings.append((soc, task_id, "IM", "n/a", rescale(u, 1, 5), 20, "07/2014"))
            ratings.append((soc, task_id, "RT", "n/a", rescale(u, 0, 100), 20, "07/2014"))
            weights = [rng.random() ** 2 for _ in range(7)]
            total = sum(weights)
            pcts = [round(100 * w / total, 2) for w in weights]
            for cat, pct in enumerate(pcts, start=1):
                ratings.append((soc, task_id, "FT", cat, pct, 20, "07/2014"))
    # A task statement without ratings.
    stmts.append(("35-2014.00", 9999, "Wash, peel, cut, and seed fruits and vegetables to prepare them for consumption.", "Supplemental", 0, "07/2014", "Incumbent"))
    write("Task Statements.txt", ["O*NET-SOC Code", "Task ID", "Task", "Task Type", "Incumbents Responding", "Date", "Domain Source"], stmts)
    write("Task Ratings.txt", ["O*NET-SOC Code", "Task ID", "Scale ID", "Category", "Data Value", "N", "Date"], ratings)

    files = {}
    for eid, name, _, fname, loadings in ELEMENTS:
        files.setdefault(fname, [])
        for soc, _, _, _, traits, *_ in OCCS:
            u = level(traits, loadings)
            rows = files[fname]
            if fname in ("Abilities", "Skills", "Knowledge", "Work Activities"):
                rows.append((soc, eid, name, "IM", "n/a", rescale(u, 1, 5), "N"))
                rows.append((soc, eid, name, "LV", "n/a", rescale(min(u + rng.gauss(0, 0.05), 1), 0, 7), "N"))
            elif fname == "Work Styles":
                rows.append((soc, eid, name, "IM", "n/a", rescale(u, 1, 5), "N"))
            elif fname == "Work Values":
                rows.append((soc, eid, name, "EX", "n/a", rescale(u, 1, 7), "N"))
            elif fname == "Interests":
                rows.append((soc, eid, name, "OI", "n/a", rescale(u, 1, 7), "N"))
            else:
                rows.append((soc, eid, name, "CX", "n/a", rescale(u, 1, 5), "N"))
                for cat in range(1, 6):
                    rows.append((soc, eid, name, "CXP", cat, 20.0, "N"))
    # Interest high-point rows are not ratings and must be ignored.
    files["Interests"].append((OCCS[0][0], "1.B.1.e", "Enterprising", "IH", "n/a", 5, "N"))
    header = ["O*NET-SOC Code", "Element ID", "Element Name", "Scale ID", "Category", "Data Value", "Recommend Suppress"]
    for fname, rows in files.items():
        write(fname + ".txt", header, rows)

    with open(os.path.join(os.path.dirname(OUT), "labor_stats.csv"), "w", encoding="utf-8", newline="\n") as f:
        f.write("soc_code,median_annual_wage,employment_growth_pct,education,major_group_title\n")
        for soc, _, _, _, _, wage, growth, edu in OCCS:
            f.write(f"{soc},{'' if wage is None else wage},{growth},\"{edu}\",\n")


if __name__ == "__main__":
    main()
