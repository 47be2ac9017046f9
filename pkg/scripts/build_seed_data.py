"""Write the bundled Spider-format seed set under data/seed/.

Produces ``tables.json`` (schemas), ``train.json`` (seed corpus) and
``content/<db_id>.json`` (per-column value lists).  Schemas follow the Spider
databases they are named after, trimmed; values are generated from a fixed seed.

    python scripts/build_seed_data.py [--out data/seed]
"""
import argparse
import json
import random
from pathlib import Path

SCHEMAS = {
    "college_1": {
        "tables": [
            ("class", [("class_code", "text"), ("crs_code", "text"), ("class_section", "text"),
                       ("class_time", "text"), ("class_room", "text"), ("prof_num", "number")]),
            ("course", [("crs_code", "text"), ("dept_code", "text"), ("crs_description", "text"),
                        ("crs_credit", "number")]),
            ("department", [("dept_code", "text"), ("dept_name", "text"), ("school_code", "text"),
                            ("emp_num", "number"), ("dept_address", "text"), ("dept_extension", "text")]),
            ("employee", [("emp_num", "number"), ("emp_lname", "text"), ("emp_fname", "text"),
                          ("emp_initial", "text"), ("emp_jobcode", "text"), ("emp_hiredate", "time"),
                          ("emp_dob", "time")]),
            ("enroll", [("class_code", "text"), ("stu_num", "number"), ("enroll_grade", "text")]),
            ("professor", [("emp_num", "number"), ("dept_code", "text"), ("prof_office", "text"),
                           ("prof_extension", "text"), ("prof_high_degree", "text")]),
            ("student", [("stu_num", "number"), ("stu_lname", "text"), ("stu_fname", "text"),
                         ("stu_init", "text"), ("stu_dob", "time"), ("stu_hrs", "number"),
                         ("stu_class", "text"), ("stu_gpa", "number"), ("stu_transfer", "number"),
                         ("dept_code", "text"), ("stu_phone", "text"), ("prof_num", "number")]),
        ],
        "pks": ["class.class_code", "course.crs_code", "department.dept_code", "employee.emp_num",
                "student.stu_num"],
        "fks": [("class.prof_num", "employee.emp_num"), ("class.crs_code", "course.crs_code"),
                ("course.dept_code", "department.dept_code"), ("department.emp_num", "employee.emp_num"),
                ("enroll.stu_num", "student.stu_num"), ("enroll.class_code", "class.class_code"),
                ("professor.dept_code", "department.dept_code"), ("professor.emp_num", "employee.emp_num"),
                ("student.dept_code", "department.dept_code")],
    },
    "concert_singer": {
        "tables": [
            ("stadium", [("stadium_id", "number"), ("location", "text"), ("name", "text"),
                         ("capacity", "number"), ("highest", "number"), ("lowest", "number"),
                         ("average", "number")]),
            ("singer", [("singer_id", "number"), ("name", "text"), ("country", "text"),
                        ("song_name", "text"), ("song_release_year", "text"), ("age", "number"),
                        ("is_male", "boolean")]),
            ("concert", [("concert_id", "number"), ("concert_name", "text"), ("theme", "text"),
                         ("stadium_id", "number"), ("year", "text")]),
            ("singer_in_concert", [("concert_id", "number"), ("singer_id", "number")]),
        ],
        "pks": ["stadium.stadium_id", "singer.singer_id", "concert.concert_id"],
        "fks": [("concert.stadium_id", "stadium.stadium_id"),
                ("singer_in_concert.singer_id", "singer.singer_id"),
                ("singer_in_concert.concert_id", "concert.concert_id")],
    },
    "pets_1": {
        "tables": [
            ("student", [("student_id", "number"), ("name", "text"), ("age", "number"), ("sex", "text"),
                         ("major", "number"), ("city_code", "text")]),
            ("has_pet", [("student_id", "number"), ("pet_id", "number")]),
            ("pets", [("pet_id", "number"), ("pet_type", "text"), ("pet_age", "number"),
                      ("weight", "number")]),
        ],
        "pks": ["student.student_id", "pets.pet_id"],
        "fks": [("has_pet.student_id", "student.student_id"), ("has_pet.pet_id", "pets.pet_id")],
    },
    "yelp": {
        "tables": [
            ("business", [("bid", "number"), ("business_id", "text"), ("name", "text"),
                          ("full_address", "text"), ("city", "text"), ("latitude", "text"),
                          ("longitude", "text"), ("review_count", "number"), ("is_open", "number"),
                          ("rating", "number"), ("state", "text")]),
            ("category", [("id", "number"), ("business_id", "text"), ("category_name", "text")]),
            ("user", [("uid", "number"), ("user_id", "text"), ("name", "text")]),
            ("checkin", [("cid", "number"), ("business_id", "text"), ("count", "number"), ("day", "text")]),
            ("neighbourhood", [("id", "number"), ("business_id", "text"), ("neighbourhood_name", "text")]),
            ("review", [("rid", "number"), ("business_id", "text"), ("user_id", "text"),
                        ("rating", "number"), ("text", "text"), ("year", "number"), ("month", "text")]),
            ("tip", [("tip_id", "number"), ("business_id", "text"), ("text", "text"), ("user_id", "text"),
                     ("likes", "number"), ("year", "number"), ("month", "text")]),
        ],
        "pks": ["business.bid", "category.id", "user.uid", "checkin.cid", "neighbourhood.id",
                "review.rid", "tip.tip_id"],
        "fks": [("category.business_id", "business.business_id"),
                ("checkin.business_id", "business.business_id"),
                ("neighbourhood.business_id", "business.business_id"),
                ("review.user_id", "user.user_id"), ("review.business_id", "business.business_id"),
                ("tip.user_id", "user.user_id"), ("tip.business_id", "business.business_id")],
    },
    "music_1": {
        "tables": [
            ("genre", [("g_name", "text"), ("rating", "text"), ("most_popular_in", "text")]),
            ("artist", [("artist_name", "text"), ("country", "text"), ("gender", "text"),
                        ("preferred_genre", "text")]),
            ("files", [("f_id", "number"), ("artist_name", "text"), ("file_size", "text"),
                       ("duration", "text"), ("formats", "text")]),
            ("song", [("song_name", "text"), ("artist_name", "text"), ("country", "text"),
                      ("f_id", "number"), ("genre_is", "text"), ("rating", "number"), ("languages", "text"),
                      ("releasedate", "time"), ("resolution", "number")]),
        ],
        "pks": ["genre.g_name", "artist.artist_name", "files.f_id", "song.song_name"],
        "fks": [("artist.preferred_genre", "genre.g_name"), ("files.artist_name", "artist.artist_name"),
                ("song.genre_is", "genre.g_name"), ("song.f_id", "files.f_id"),
                ("song.artist_name", "artist.artist_name")],
    },
    "riding_club": {
        "tables": [
            ("player", [("Player_ID", "number"), ("Sponsor_name", "text"), ("Player_name", "text"),
                        ("Gender", "text"), ("Residence", "text"), ("Occupation", "text"), ("Votes", "number"),
                        ("Rank", "text")]),
            ("club", [("Club_ID", "number"), ("Club_Name", "text"), ("Region", "text"),
                      ("Start_year", "number")]),
            ("coach", [("Coach_ID", "number"), ("Coach_name", "text"), ("Gender", "text"),
                       ("Club_ID", "number"), ("Rank", "number")]),
            ("player_coach", [("Player_ID", "number"), ("Coach_ID", "number"), ("Starting_year", "number")]),
            ("match_result", [("Rank", "number"), ("Club_ID", "number"), ("Gold", "number"),
                              ("Big_Silver", "number"), ("Small_Silver", "number"), ("Bronze", "number"),
                              ("Points", "number")]),
        ],
        "pks": ["player.Player_ID", "club.Club_ID", "coach.Coach_ID", "player_coach.Player_ID",
                "match_result.Rank"],
        "fks": [("coach.Club_ID", "club.Club_ID"), ("player_coach.Coach_ID", "coach.Coach_ID"),
                ("player_coach.Player_ID", "player.Player_ID"), ("match_result.Club_ID", "club.Club_ID")],
    },
    "singer": {
        "tables": [
            ("singer", [("Singer_ID", "number"), ("Name", "text"), ("Birth_Year", "number"),
                        ("Net_Worth_Millions", "number"), ("Citizenship", "text")]),
        ],
        "pks": ["singer.Singer_ID"],
        "fks": [],
    },
    "department_management": {
        "tables": [
            ("department", [("Department_ID", "number"), ("Name", "text"), ("Creation", "text"),
                            ("Ranking", "number"), ("Budget_in_Billions", "number"),
                            ("Num_Employees", "number")]),
            ("head", [("head_ID", "number"), ("name", "text"), ("born_state", "text"), ("age", "number")]),
            ("management", [("department_ID", "number"), ("head_ID", "number"),
                            ("temporary_acting", "text")]),
        ],
        "pks": ["department.Department_ID", "head.head_ID", "management.department_ID"],
        "fks": [("management.head_ID", "head.head_ID"),
                ("management.department_ID", "department.Department_ID")],
    },
    "flight_company": {
        "tables": [
            ("airport", [("id", "number"), ("City", "text"), ("Country", "text"), ("IATA", "text"),
                         ("ICAO", "text"), ("name", "text")]),
            ("operate_company", [("id", "number"), ("name", "text"), ("Type", "text"),
                                 ("Principal_activities", "text"), ("Incorporated_in", "text"),
                                 ("Group_Equity_Shareholding", "number")]),
            ("flight", [("id", "number"), ("Vehicle_Flight_number", "text"), ("Date", "text"),
                        ("Pilot", "text"), ("Velocity", "number"), ("Altitude", "number"),
                        ("airport_id", "number"), ("company_id", "number")]),
            ("weather", [("date", "text"), ("max_temperature", "number"), ("min_temperature", "number"),
                         ("precipitation", "number")]),
        ],
        "pks": ["airport.id", "operate_company.id", "flight.id"],
        "fks": [("flight.company_id", "operate_company.id"), ("flight.airport_id", "airport.id")],
    },
}

CORPUS = """
college_1 | SELECT count(*) FROM class
college_1 | SELECT count(DISTINCT crs_code) FROM class
college_1 | SELECT dept_name FROM department WHERE school_code = 'BUS'
college_1 | SELECT count(*) FROM professor WHERE prof_high_degree = 'Ph.D.'
college_1 | SELECT emp_fname, emp_lname FROM employee WHERE emp_jobcode = 'PROF' ORDER BY emp_dob
college_1 | SELECT stu_fname FROM student WHERE stu_gpa > 3.5
college_1 | SELECT max(stu_gpa), avg(stu_gpa), min(stu_gpa), dept_code FROM student GROUP BY dept_code
college_1 | SELECT count(*), dept_code FROM student GROUP BY dept_code
college_1 | SELECT sum(crs_credit), dept_code FROM course GROUP BY dept_code
college_1 | SELECT T1.stu_fname, T1.stu_lname FROM student AS T1 JOIN enroll AS T2 ON T1.stu_num = T2.stu_num WHERE T2.enroll_grade = 'C'
college_1 | SELECT T2.dept_name FROM course AS T1 JOIN department AS T2 ON T1.dept_code = T2.dept_code WHERE T1.crs_description LIKE '%Statistics%'
college_1 | SELECT T1.emp_fname FROM employee AS T1 JOIN professor AS T2 ON T1.emp_num = T2.emp_num WHERE T2.dept_code = 'ACCT'
college_1 | SELECT count(*) FROM class AS T1 JOIN course AS T2 ON T1.crs_code = T2.crs_code WHERE T2.dept_code = 'ACCT'
college_1 | SELECT T3.dept_name FROM course AS T1 JOIN class AS T2 ON T1.crs_code = T2.crs_code JOIN department AS T3 ON T1.dept_code = T3.dept_code WHERE T2.class_room = 'KLR209'
college_1 | SELECT T2.dept_name, count(*) FROM student AS T1 JOIN department AS T2 ON T1.dept_code = T2.dept_code GROUP BY T1.dept_code ORDER BY count(*) DESC LIMIT 1
college_1 | SELECT stu_fname FROM student WHERE stu_num NOT IN (SELECT stu_num FROM enroll)
college_1 | SELECT class_room FROM class WHERE crs_code = 'ACCT-211'
college_1 | SELECT dept_address FROM department WHERE dept_name = 'History'
college_1 | SELECT count(DISTINCT dept_code) FROM course
college_1 | SELECT T1.emp_lname, T1.emp_hiredate FROM employee AS T1 JOIN professor AS T2 ON T1.emp_num = T2.emp_num WHERE T2.prof_office = 'DRE 102'
college_1 | SELECT T1.crs_code FROM class AS T1 JOIN enroll AS T2 ON T1.class_code = T2.class_code JOIN student AS T3 ON T2.stu_num = T3.stu_num WHERE T3.stu_lname = 'Smithson'
college_1 | SELECT count(*) FROM student WHERE stu_transfer = 1
college_1 | SELECT emp_fname FROM employee ORDER BY emp_dob LIMIT 1
college_1 | SELECT dept_code FROM professor GROUP BY dept_code ORDER BY count(*) DESC LIMIT 1
college_1 | SELECT T2.emp_fname, T1.class_room FROM class AS T1 JOIN employee AS T2 ON T1.prof_num = T2.emp_num
college_1 | SELECT crs_code FROM course WHERE crs_credit > (SELECT avg(crs_credit) FROM course)
college_1 | SELECT stu_fname FROM student WHERE dept_code = 'ACCT' INTERSECT SELECT T1.stu_fname FROM student AS T1 JOIN enroll AS T2 ON T1.stu_num = T2.stu_num WHERE T2.enroll_grade = 'A'
college_1 | SELECT count(*) FROM department
college_1 | SELECT stu_fname, stu_lname, stu_gpa FROM student WHERE stu_gpa > 3 ORDER BY stu_dob DESC LIMIT 1
college_1 | SELECT count(*), school_code FROM department GROUP BY school_code HAVING count(*) > 1
college_1 | SELECT dept_name FROM department ORDER BY dept_name
college_1 | SELECT T2.emp_fname, T1.prof_office FROM professor AS T1 JOIN employee AS T2 ON T1.emp_num = T2.emp_num WHERE T1.prof_high_degree = 'Ph.D.'
college_1 | SELECT emp_jobcode, count(*) FROM employee GROUP BY emp_jobcode ORDER BY count(*) DESC LIMIT 1
college_1 | SELECT T1.stu_fname, T1.stu_gpa FROM student AS T1 JOIN department AS T2 ON T1.dept_code = T2.dept_code WHERE T2.dept_name = 'Accounting'
concert_singer | SELECT count(*) FROM singer
concert_singer | SELECT name, country, age FROM singer ORDER BY age DESC
concert_singer | SELECT avg(age), min(age), max(age) FROM singer WHERE country = 'France'
concert_singer | SELECT song_name, song_release_year FROM singer ORDER BY age LIMIT 1
concert_singer | SELECT DISTINCT country FROM singer WHERE age > 20
concert_singer | SELECT country, count(*) FROM singer GROUP BY country
concert_singer | SELECT song_name FROM singer WHERE age > (SELECT avg(age) FROM singer)
concert_singer | SELECT location, name FROM stadium WHERE capacity BETWEEN 5000 AND 10000
concert_singer | SELECT max(capacity), average FROM stadium
concert_singer | SELECT name, capacity FROM stadium ORDER BY average DESC LIMIT 1
concert_singer | SELECT count(*) FROM concert WHERE year = 2014 OR year = 2015
concert_singer | SELECT T2.name, count(*) FROM concert AS T1 JOIN stadium AS T2 ON T1.stadium_id = T2.stadium_id GROUP BY T1.stadium_id
concert_singer | SELECT T2.name, T2.capacity FROM concert AS T1 JOIN stadium AS T2 ON T1.stadium_id = T2.stadium_id WHERE T1.year >= 2014 GROUP BY T2.stadium_id ORDER BY count(*) DESC LIMIT 1
concert_singer | SELECT year FROM concert GROUP BY year ORDER BY count(*) DESC LIMIT 1
concert_singer | SELECT name FROM stadium WHERE stadium_id NOT IN (SELECT stadium_id FROM concert)
concert_singer | SELECT country FROM singer WHERE age > 40 INTERSECT SELECT country FROM singer WHERE age < 30
concert_singer | SELECT name FROM stadium EXCEPT SELECT T2.name FROM concert AS T1 JOIN stadium AS T2 ON T1.stadium_id = T2.stadium_id WHERE T1.year = 2014
concert_singer | SELECT T2.concert_name, T2.theme, count(*) FROM singer_in_concert AS T1 JOIN concert AS T2 ON T1.concert_id = T2.concert_id GROUP BY T2.concert_id
concert_singer | SELECT T2.name, count(*) FROM singer_in_concert AS T1 JOIN singer AS T2 ON T1.singer_id = T2.singer_id GROUP BY T2.singer_id
concert_singer | SELECT T2.name FROM singer_in_concert AS T1 JOIN singer AS T2 ON T1.singer_id = T2.singer_id JOIN concert AS T3 ON T1.concert_id = T3.concert_id WHERE T3.year = 2014
concert_singer | SELECT name, country FROM singer WHERE song_name LIKE '%Hey%'
concert_singer | SELECT T2.name, T2.location FROM concert AS T1 JOIN stadium AS T2 ON T1.stadium_id = T2.stadium_id WHERE T1.year = 2014 INTERSECT SELECT T2.name, T2.location FROM concert AS T1 JOIN stadium AS T2 ON T1.stadium_id = T2.stadium_id WHERE T1.year = 2015
concert_singer | SELECT count(*) FROM concert WHERE stadium_id = (SELECT stadium_id FROM stadium ORDER BY capacity DESC LIMIT 1)
concert_singer | SELECT count(*) FROM stadium WHERE capacity > 10000
concert_singer | SELECT DISTINCT T1.name FROM singer AS T1 JOIN singer_in_concert AS T2 ON T1.singer_id = T2.singer_id
concert_singer | SELECT avg(capacity), max(capacity) FROM stadium
concert_singer | SELECT name FROM singer WHERE is_male = 'T'
concert_singer | SELECT count(*) FROM concert
concert_singer | SELECT name, country, age FROM singer ORDER BY age DESC
concert_singer | SELECT count(*) FROM singer
concert_singer | SELECT T2.concert_name FROM singer_in_concert AS T1 JOIN concert AS T2 ON T1.concert_id = T2.concert_id GROUP BY T1.concert_id ORDER BY count(*) DESC LIMIT 1
concert_singer | SELECT theme FROM concert WHERE year > 2014
pets_1 | SELECT T1.name FROM student AS T1 JOIN has_pet AS T2 ON T1.student_id = T2.student_id
pets_1 | SELECT count(*) FROM pets WHERE weight > 10
pets_1 | SELECT weight FROM pets ORDER BY pet_age LIMIT 1
pets_1 | SELECT max(weight), pet_type FROM pets GROUP BY pet_type
pets_1 | SELECT count(*) FROM student AS T1 JOIN has_pet AS T2 ON T1.student_id = T2.student_id WHERE T1.age > 20
pets_1 | SELECT count(*) FROM student AS T1 JOIN has_pet AS T2 ON T1.student_id = T2.student_id JOIN pets AS T3 ON T2.pet_id = T3.pet_id WHERE T1.sex = 'F' AND T3.pet_type = 'dog'
pets_1 | SELECT count(DISTINCT pet_type) FROM pets
pets_1 | SELECT DISTINCT T1.name FROM student AS T1 JOIN has_pet AS T2 ON T1.student_id = T2.student_id JOIN pets AS T3 ON T3.pet_id = T2.pet_id WHERE T3.pet_type = 'cat' OR T3.pet_type = 'dog'
pets_1 | SELECT major, age FROM student WHERE student_id NOT IN (SELECT T1.student_id FROM has_pet AS T1 JOIN pets AS T2 ON T1.pet_id = T2.pet_id WHERE T2.pet_type = 'cat')
pets_1 | SELECT student_id FROM student EXCEPT SELECT T1.student_id FROM student AS T1 JOIN has_pet AS T2 ON T1.student_id = T2.student_id JOIN pets AS T3 ON T3.pet_id = T2.pet_id WHERE T3.pet_type = 'cat'
pets_1 | SELECT pet_type, avg(pet_age), max(pet_age) FROM pets GROUP BY pet_type
pets_1 | SELECT avg(weight), pet_type FROM pets GROUP BY pet_type
pets_1 | SELECT T1.name, T1.age FROM student AS T1 JOIN has_pet AS T2 ON T1.student_id = T2.student_id
pets_1 | SELECT T2.pet_id FROM student AS T1 JOIN has_pet AS T2 ON T1.student_id = T2.student_id WHERE T1.name = 'Smith'
pets_1 | SELECT count(*), T1.student_id FROM student AS T1 JOIN has_pet AS T2 ON T1.student_id = T2.student_id GROUP BY T1.student_id
pets_1 | SELECT name FROM student WHERE student_id NOT IN (SELECT student_id FROM has_pet)
pets_1 | SELECT avg(age) FROM student WHERE student_id NOT IN (SELECT student_id FROM has_pet)
pets_1 | SELECT count(*) FROM student
pets_1 | SELECT pet_type, weight FROM pets ORDER BY pet_age LIMIT 1
pets_1 | SELECT pet_id, weight FROM pets WHERE pet_age > 1
pets_1 | SELECT count(*), pet_type FROM pets GROUP BY pet_type
pets_1 | SELECT name, age FROM student WHERE sex = 'F'
pets_1 | SELECT count(*) FROM pets
yelp | SELECT T1.neighbourhood_name FROM neighbourhood AS T1 JOIN business AS T2 ON T1.business_id = T2.business_id WHERE T2.city = "Madison" GROUP BY T1.neighbourhood_name ORDER BY COUNT(DISTINCT T2.name) DESC LIMIT 1
yelp | SELECT T2.name FROM user AS T2 JOIN review AS T1 ON T2.user_id = T1.user_id GROUP BY T2.name HAVING AVG(T1.rating) < 3
yelp | SELECT city FROM business WHERE name = 'MGM Grand Buffet'
yelp | SELECT name FROM business WHERE rating > 3.5
yelp | SELECT full_address FROM business WHERE city = 'Madison' AND name = 'Taj Mahal'
yelp | SELECT T1.name FROM business AS T1 JOIN category AS T2 ON T1.business_id = T2.business_id WHERE T1.city = 'Los Angeles' AND T2.category_name = 'Seafood'
yelp | SELECT T1.text FROM review AS T1 JOIN user AS T2 ON T1.user_id = T2.user_id WHERE T2.name = 'Niloofar'
yelp | SELECT count(DISTINCT name) FROM business WHERE state = 'Texas'
yelp | SELECT sum(T2.count) FROM business AS T1 JOIN checkin AS T2 ON T1.business_id = T2.business_id WHERE T1.name = 'Cafe Zinho'
yelp | SELECT T1.name FROM business AS T1 JOIN checkin AS T2 ON T1.business_id = T2.business_id GROUP BY T1.name ORDER BY sum(T2.count) DESC LIMIT 1
yelp | SELECT count(*) FROM review WHERE year = 2014
yelp | SELECT avg(rating) FROM review WHERE month = 'April'
yelp | SELECT T2.name FROM tip AS T1 JOIN user AS T2 ON T1.user_id = T2.user_id WHERE T1.likes > 9
yelp | SELECT count(DISTINCT T1.text) FROM review AS T1 JOIN business AS T2 ON T1.business_id = T2.business_id WHERE T2.name = 'Vintner Grill'
yelp | SELECT T1.neighbourhood_name FROM neighbourhood AS T1 JOIN business AS T2 ON T1.business_id = T2.business_id WHERE T2.city = 'Madison' GROUP BY T1.neighbourhood_name
yelp | SELECT name FROM business WHERE review_count > 100 AND is_open = 1
yelp | SELECT T2.name FROM review AS T1 JOIN user AS T2 ON T1.user_id = T2.user_id WHERE T1.year = 2015 GROUP BY T2.name HAVING count(*) > 5
yelp | SELECT T1.name FROM business AS T1 JOIN tip AS T2 ON T1.business_id = T2.business_id JOIN user AS T3 ON T3.user_id = T2.user_id WHERE T3.name = 'Michelle'
yelp | SELECT city FROM business GROUP BY city ORDER BY count(*) DESC LIMIT 1
yelp | SELECT day FROM checkin GROUP BY day ORDER BY sum(count) DESC LIMIT 1
yelp | SELECT name FROM business WHERE city = 'Madison'
yelp | SELECT count(*) FROM business WHERE city = 'Dallas' AND rating > 4
yelp | SELECT T1.name FROM business AS T1 JOIN review AS T2 ON T1.business_id = T2.business_id WHERE T2.rating < 2
music_1 | SELECT artist_name FROM song INTERSECT SELECT artist_name FROM artist
music_1 | SELECT song_name FROM song WHERE resolution > (SELECT min(resolution) FROM song WHERE languages = 'english')
music_1 | SELECT count(*) FROM artist WHERE country = 'Bangladesh'
music_1 | SELECT artist_name FROM artist WHERE country = 'UK' AND gender = 'Male'
music_1 | SELECT song_name FROM song WHERE genre_is = 'modern' OR languages = 'english'
music_1 | SELECT max(file_size) FROM files
music_1 | SELECT T1.artist_name, T1.country FROM artist AS T1 JOIN song AS T2 ON T1.artist_name = T2.artist_name WHERE T2.rating > 9
music_1 | SELECT T2.file_size, T2.formats FROM song AS T1 JOIN files AS T2 ON T1.f_id = T2.f_id WHERE T1.resolution < 800
music_1 | SELECT avg(rating), languages FROM song GROUP BY languages
music_1 | SELECT g_name, rating FROM genre ORDER BY g_name
music_1 | SELECT count(*), formats FROM files GROUP BY formats
music_1 | SELECT artist_name FROM artist WHERE country = 'UK' INTERSECT SELECT artist_name FROM song WHERE languages = 'english'
music_1 | SELECT f_id FROM files WHERE formats = 'mp4' UNION SELECT f_id FROM song WHERE resolution > 720
music_1 | SELECT DISTINCT T1.artist_name FROM artist AS T1 JOIN files AS T2 ON T1.artist_name = T2.artist_name WHERE T2.duration LIKE '%4:%'
music_1 | SELECT T1.country FROM artist AS T1 JOIN song AS T2 ON T1.artist_name = T2.artist_name GROUP BY T2.artist_name ORDER BY count(*) DESC LIMIT 1
music_1 | SELECT song_name FROM song WHERE releasedate LIKE '%Mar%'
music_1 | SELECT artist_name FROM artist EXCEPT SELECT artist_name FROM song
music_1 | SELECT song_name FROM song ORDER BY rating DESC LIMIT 3
music_1 | SELECT T1.gender, T1.artist_name FROM artist AS T1 JOIN song AS T2 ON T1.artist_name = T2.artist_name ORDER BY T2.resolution LIMIT 1
music_1 | SELECT count(*) FROM files WHERE duration LIKE '%4:%'
music_1 | SELECT count(*) FROM song WHERE languages = 'bangla'
music_1 | SELECT song_name FROM song WHERE rating < (SELECT max(rating) FROM song WHERE genre_is = 'blues')
riding_club | SELECT Club_ID FROM club WHERE Club_Name = "AIK"
riding_club | SELECT count(*) FROM player
riding_club | SELECT Player_name FROM player ORDER BY Votes ASC
riding_club | SELECT Gender, Occupation FROM player
riding_club | SELECT Player_name, Residence FROM player WHERE Occupation != 'Researcher'
riding_club | SELECT Sponsor_name FROM player WHERE Residence = 'Brandon' OR Residence = 'Birtle'
riding_club | SELECT Player_name FROM player ORDER BY Votes DESC LIMIT 1
riding_club | SELECT Occupation, count(*) FROM player GROUP BY Occupation
riding_club | SELECT Occupation FROM player GROUP BY Occupation ORDER BY count(*) DESC LIMIT 1
riding_club | SELECT Residence FROM player GROUP BY Residence HAVING count(*) >= 2
riding_club | SELECT T3.Player_name, T2.Coach_name FROM player_coach AS T1 JOIN coach AS T2 ON T1.Coach_ID = T2.Coach_ID JOIN player AS T3 ON T1.Player_ID = T3.Player_ID
riding_club | SELECT T3.Player_name FROM player_coach AS T1 JOIN coach AS T2 ON T1.Coach_ID = T2.Coach_ID JOIN player AS T3 ON T1.Player_ID = T3.Player_ID WHERE T2.Rank = 1
riding_club | SELECT T1.Coach_name FROM coach AS T1 JOIN club AS T2 ON T1.Club_ID = T2.Club_ID WHERE T2.Region = 'USA'
riding_club | SELECT T1.Club_ID, T1.Club_Name, count(*) FROM club AS T1 JOIN coach AS T2 ON T1.Club_ID = T2.Club_ID GROUP BY T1.Club_ID
riding_club | SELECT T1.Club_ID, T1.Gold FROM match_result AS T1 JOIN coach AS T2 ON T1.Club_ID = T2.Club_ID GROUP BY T1.Club_ID ORDER BY count(*) DESC LIMIT 1
riding_club | SELECT Gender, count(*) FROM coach GROUP BY Gender
riding_club | SELECT avg(Points) FROM match_result
riding_club | SELECT Player_name FROM player WHERE Player_ID NOT IN (SELECT Player_ID FROM player_coach)
riding_club | SELECT Residence FROM player WHERE Gender = 'M' INTERSECT SELECT Residence FROM player WHERE Gender = 'F'
riding_club | SELECT count(*) FROM club WHERE Start_year > 2000
riding_club | SELECT Club_Name FROM club ORDER BY Start_year DESC
riding_club | SELECT T1.Club_Name FROM club AS T1 JOIN match_result AS T2 ON T1.Club_ID = T2.Club_ID WHERE T2.Gold > 10
riding_club | SELECT count(*) FROM coach
riding_club | SELECT Player_name, Votes FROM player WHERE Rank = '1st'
singer | SELECT count(*) FROM singer
singer | SELECT Name FROM singer ORDER BY Net_Worth_Millions ASC
singer | SELECT Birth_Year, Citizenship FROM singer
singer | SELECT Name FROM singer WHERE Citizenship != 'France'
singer | SELECT Name FROM singer WHERE Birth_Year = 1948 OR Birth_Year = 1949
singer | SELECT Name FROM singer ORDER BY Net_Worth_Millions DESC LIMIT 1
singer | SELECT Citizenship, count(*) FROM singer GROUP BY Citizenship
singer | SELECT Citizenship FROM singer GROUP BY Citizenship ORDER BY count(*) DESC LIMIT 1
singer | SELECT Citizenship, max(Net_Worth_Millions) FROM singer GROUP BY Citizenship
singer | SELECT Citizenship FROM singer WHERE Birth_Year < 1945 INTERSECT SELECT Citizenship FROM singer WHERE Birth_Year > 1955
singer | SELECT Name FROM singer WHERE Net_Worth_Millions > (SELECT avg(Net_Worth_Millions) FROM singer)
singer | SELECT count(DISTINCT Citizenship) FROM singer
singer | SELECT count(*) FROM singer
department_management | SELECT count(*) FROM head WHERE age > 56
department_management | SELECT name, born_state, age FROM head ORDER BY age
department_management | SELECT Creation, Name, Budget_in_Billions FROM department
department_management | SELECT max(Budget_in_Billions), min(Budget_in_Billions) FROM department
department_management | SELECT avg(Num_Employees) FROM department WHERE Ranking BETWEEN 10 AND 15
department_management | SELECT name FROM head WHERE born_state != 'California'
department_management | SELECT DISTINCT T1.Creation FROM department AS T1 JOIN management AS T2 ON T1.Department_ID = T2.department_ID JOIN head AS T3 ON T2.head_ID = T3.head_ID WHERE T3.born_state = 'Alabama'
department_management | SELECT born_state FROM head GROUP BY born_state HAVING count(*) >= 3
department_management | SELECT Creation FROM department GROUP BY Creation ORDER BY count(*) DESC LIMIT 1
department_management | SELECT T1.Name, T1.Num_Employees FROM department AS T1 JOIN management AS T2 ON T1.Department_ID = T2.department_ID WHERE T2.temporary_acting = 'Yes'
department_management | SELECT count(DISTINCT temporary_acting) FROM management
department_management | SELECT count(*) FROM department WHERE Department_ID NOT IN (SELECT department_ID FROM management)
department_management | SELECT DISTINCT T1.age FROM management AS T2 JOIN head AS T1 ON T1.head_ID = T2.head_ID WHERE T2.temporary_acting = 'Yes'
department_management | SELECT T3.born_state FROM department AS T1 JOIN management AS T2 ON T1.Department_ID = T2.department_ID JOIN head AS T3 ON T2.head_ID = T3.head_ID WHERE T1.Name = 'Treasury' INTERSECT SELECT T3.born_state FROM department AS T1 JOIN management AS T2 ON T1.Department_ID = T2.department_ID JOIN head AS T3 ON T2.head_ID = T3.head_ID WHERE T1.Name = 'Homeland Security'
department_management | SELECT T1.Department_ID, T1.Name, count(*) FROM management AS T2 JOIN department AS T1 ON T1.Department_ID = T2.department_ID GROUP BY T1.Department_ID HAVING count(*) > 1
department_management | SELECT head_ID, name FROM head WHERE name LIKE '%Ha%'
department_management | SELECT count(*) FROM department
department_management | SELECT Name FROM department ORDER BY Ranking
flight_company | SELECT count(*) FROM flight WHERE Velocity > 200
flight_company | SELECT Vehicle_Flight_number, Date, Pilot FROM flight ORDER BY Altitude ASC
flight_company | SELECT id, Country, City, name FROM airport ORDER BY name
flight_company | SELECT max(Group_Equity_Shareholding) FROM operate_company
flight_company | SELECT avg(Velocity) FROM flight WHERE Pilot = 'Thompson'
flight_company | SELECT name FROM operate_company UNION SELECT name FROM airport
flight_company | SELECT Type, count(*) FROM operate_company GROUP BY Type
flight_company | SELECT Type FROM operate_company GROUP BY Type ORDER BY count(*) DESC LIMIT 1
flight_company | SELECT T2.name, count(*) FROM flight AS T1 JOIN airport AS T2 ON T1.airport_id = T2.id GROUP BY T1.airport_id
flight_company | SELECT T2.name FROM flight AS T1 JOIN airport AS T2 ON T1.airport_id = T2.id WHERE T1.Pilot = 'Thompson'
flight_company | SELECT T2.Type FROM flight AS T1 JOIN operate_company AS T2 ON T1.company_id = T2.id WHERE T1.Velocity < 200
flight_company | SELECT T1.id, T1.name FROM operate_company AS T1 JOIN flight AS T2 ON T1.id = T2.company_id GROUP BY T1.id HAVING count(*) > 1
flight_company | SELECT T1.id, T1.name, T1.IATA FROM airport AS T1 JOIN flight AS T2 ON T1.id = T2.airport_id GROUP BY T2.airport_id ORDER BY count(*) DESC LIMIT 1
flight_company | SELECT DISTINCT T2.Pilot FROM airport AS T1 JOIN flight AS T2 ON T1.id = T2.airport_id WHERE T1.Country = 'United States' OR T1.name = 'Billund Airport'
flight_company | SELECT name FROM airport WHERE id NOT IN (SELECT airport_id FROM flight)
flight_company | SELECT count(*) FROM flight AS T1 JOIN airport AS T2 ON T1.airport_id = T2.id WHERE T2.Country = 'Iceland'
flight_company | SELECT DISTINCT T1.Pilot FROM flight AS T1 JOIN operate_company AS T2 ON T1.company_id = T2.id WHERE T2.Principal_activities = 'Cargo' INTERSECT SELECT DISTINCT T1.Pilot FROM flight AS T1 JOIN operate_company AS T2 ON T1.company_id = T2.id WHERE T2.Principal_activities = 'Catering services'
flight_company | SELECT name FROM airport WHERE name LIKE '%international%'
flight_company | SELECT max(max_temperature), min(min_temperature) FROM weather
flight_company | SELECT date FROM weather WHERE precipitation > 0.5
flight_company | SELECT count(*) FROM operate_company AS T1 JOIN flight AS T2 ON T1.id = T2.company_id WHERE T1.Principal_activities = 'Cargo'
flight_company | SELECT count(*) FROM airport
"""

# values that the golden examples rely on
PINNED = {
    ("riding_club", "club", "Club_Name"): ["AIK", "BK Häcken", "Djurgårdens IF", "Gefle IF", "Halmstads BK"],
    ("yelp", "business", "city"): ["Madison", "Dallas", "Los Angeles", "Phoenix", "Las Vegas"],
    ("pets_1", "pets", "pet_type"): ["cat", "dog"],
    ("music_1", "song", "languages"): ["english", "bangla"],
}

WORDS = ["Alpha", "Brook", "Cedar", "Delta", "Ember", "Falcon", "Grove", "Harbor", "Iris", "Juniper",
         "Kestrel", "Linden", "Maple", "Nova", "Orchid", "Pioneer"]


def _column_values(rng, db_id, table, name, dtype, n):
    pinned = PINNED.get((db_id, table, name))
    if pinned:
        return pinned
    if dtype == "number":
        if name.lower().endswith("id") or name.lower() in ("emp_num", "stu_num", "prof_num", "rank", "f_id"):
            return list(range(1, n + 1))
        return sorted({round(rng.uniform(1, 200), 1) if "gpa" not in name else round(rng.uniform(2, 4), 2)
                       for _ in range(n)})
    if dtype == "time":
        return [f"{rng.randint(1950, 2020)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}" for _ in range(n)]
    if dtype == "boolean":
        return ["T", "F"]
    return [f"{rng.choice(WORDS)} {name.replace('_', ' ').title()} {i}" for i in range(1, n + 1)]


def build(out: Path, rows: int = 8, seed: int = 0):
    rng = random.Random(seed)
    out.mkdir(parents=True, exist_ok=True)
    (out / "content").mkdir(exist_ok=True)
    entries = []
    for db_id, spec in SCHEMAS.items():
        names = [[-1, "*"]]
        types = ["text"]
        index = {}
        for t_idx, (tname, cols) in enumerate(spec["tables"]):
            for cname, ctype in cols:
                index[f"{tname}.{cname}"] = len(names)
                names.append([t_idx, cname])
                types.append(ctype)
        entries.append({
            "db_id": db_id,
            "table_names_original": [t for t, _ in spec["tables"]],
            "table_names": [t.replace("_", " ") for t, _ in spec["tables"]],
            "column_names_original": names,
            "column_names": [[t, n.lower().replace("_", " ")] for t, n in names],
            "column_types": types,
            "primary_keys": [index[k] for k in spec["pks"]],
            "foreign_keys": [[index[a], index[b]] for a, b in spec["fks"]],
        })
        values = {}
        for tname, cols in spec["tables"]:
            for cname, ctype in cols:
                values[index[f"{tname}.{cname}"]] = _column_values(rng, db_id, tname, cname, ctype, rows)
        # foreign-key columns draw from the referenced column
        for a, b in spec["fks"]:
            values[index[a]] = list(values[index[b]])
        with open(out / "content" / f"{db_id}.json", "w", encoding="utf-8") as fh:
            json.dump({str(k): v for k, v in sorted(values.items())}, fh, ensure_ascii=False, indent=1)
    with open(out / "tables.json", "w", encoding="utf-8") as fh:
        json.dump(entries, fh, indent=1)
    corpus = []
    for line in CORPUS.strip().splitlines():
        db_id, query = (part.strip() for part in line.split("|", 1))
        corpus.append({"db_id": db_id, "query": query})
    with open(out / "train.json", "w", encoding="utf-8") as fh:
        json.dump(corpus, fh, indent=1)
    return entries, corpus


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "seed"))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    entries, corpus = build(Path(args.out), seed=args.seed)
    print(f"wrote {len(entries)} schemas and {len(corpus)} queries to {args.out}")
